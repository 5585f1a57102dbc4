import argparse
import os
import sys
from pathlib import Path
from typing import Dict, List
parent_dir = str(Path(__file__).parent.parent)
if parent_dir not in sys.path:
    sys.path.insert(0, parent_dir)
src_dir = str(Path(__file__).parent)
if src_dir not in sys.path:
    sys.path.insert(0, src_dir)
from dotenv import load_dotenv
from numerics.errors import MifbError
from numerics.utils import logger
from experiments import ExperimentRunner, load_config
from experiments.outputs import write_metadata


def _make_runner(args) -> ExperimentRunner:
    config = load_config(args.config)
    return ExperimentRunner(config, output_dir=args.out, plot=False if args.no_plot else None, seed_override=args.seed_override, workers=args.workers)


def _execute(args, method: str, title: str) -> int:
    try:
        runner = _make_runner(args)
        rows = getattr(runner, method)()
        write_metadata(runner.output_dir, method, args.config, {'seed': runner.seed, 'workers': runner.workers})
        print_summary(title, rows)
        logger.info(f'✓ {title} finished, outputs in {runner.output_dir}')
        return 0
    except MifbError as e:
        logger.error(f'✗ {title} failed: {e}')
        return e.exit_code
    except Exception as e:
        logger.error(f'✗ {title} failed: {e}')
        return 1


def run_schedules(args) -> int:
    return _execute(args, 'run', 'RUN')


def compare_schedules(args) -> int:
    return _execute(args, 'compare', 'COMPARE')


def analyze_rates(args) -> int:
    return _execute(args, 'rates', 'RATES')


def print_summary(title: str, rows: List[Dict]):
    print('\n' + '=' * 60)
    print(f'{title} SUMMARY')
    print('=' * 60)
    for row in rows:
        fields = ', '.join((f'{k}={v:.6g}' if isinstance(v, float) else f'{k}={v}' for k, v in row.items() if k != 'schedule' and v is not None))
        print(f"  • {row.get('schedule')}: {fields}")
    print('=' * 60)


def main():
    load_dotenv()
    parser = argparse.ArgumentParser(description='MiFB: multi-step inertial forward-backward experiments', formatter_class=argparse.RawDescriptionHelpFormatter, epilog='\nExamples:\n  python main.py run config/regression.json              # Trace CSVs for every schedule\n  python main.py compare config/regression_large_step.json\n  python main.py rates config/regression.json --no-plot  # Predicted vs observed local rates\n        ')
    subparsers = parser.add_subparsers(dest='command', help='Command to run')
    for name, help_text in (('run', 'Run every schedule against a shared reference point'), ('compare', 'Compare schedules by iterations to tolerance and identification'), ('rates', 'Predict and measure local linear rates')):
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument('config', help='Path to experiment JSON config')
        sub.add_argument('--out', default=None, help='Output directory (default: config output.directory or MIFB_OUTPUT_DIR)')
        sub.add_argument('--no-plot', action='store_true', help='Skip SVG plots')
        sub.add_argument('--seed-override', type=int, default=None, help='Replace the problem seed')
        sub.add_argument('--workers', type=int, default=int(os.getenv('MIFB_WORKERS', '1')), help='Schedules solved in parallel')
    args = parser.parse_args()
    if not args.command:
        parser.print_help()
        sys.exit(1)
    commands = {'run': run_schedules, 'compare': compare_schedules, 'rates': analyze_rates}
    sys.exit(commands[args.command](args))
if __name__ == '__main__':
    main()
