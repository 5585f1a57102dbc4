import logging
import os
import time
from functools import wraps
from typing import Optional
_handlers = [logging.StreamHandler()]
if os.getenv('MIFB_LOG_FILE'):
    _handlers.append(logging.FileHandler(os.getenv('MIFB_LOG_FILE')))
logging.basicConfig(level=os.getenv('MIFB_LOG_LEVEL', 'INFO').upper(), format='%(asctime)s - %(name)s - %(levelname)s - %(message)s', handlers=_handlers)
logger = logging.getLogger('mifb')

def timed(label: Optional[str]=None):

    def decorator(func):

        @wraps(func)
        def wrapper(*args, **kwargs):
            start = time.perf_counter()
            result = func(*args, **kwargs)
            logger.debug(f'{label or func.__name__} took {time.perf_counter() - start:.3f}s')
            return result
        return wrapper
    return decorator

def log_progress(current: int, total: int, prefix: str='Progress'):
    percentage = current / total * 100 if total > 0 else 0
    logger.info(f'{prefix}: {current}/{total} ({percentage:.1f}%)')

def banner(title: str):
    logger.info('=' * 60)
    logger.info(title)
    logger.info('=' * 60)
