"""Command line entry point

    > arlbsg <subcommand> [flags]

    subcommands:

        simulate   synthetic panel and ground truth  (models/simulate.py)
        fit        chains, draws and manifest        (jobs/fit.py)
        summarize  co-clustering, VI and ARI csvs    (models/summarize.py)
        diagnose   WAIC, PSIS-LOO and acceptance     (models/diagnose.py)
        validate   configuration and panel checks    (models/validate.py)
        replicate  repeated simulation study         (jobs/replicate.py)

    Any error exits with status 1 and a one line json record on stderr:

        {"error": <class>, "message": ..., "details": {...}}
"""
import importlib
import json
import logging
import sys

SUBCOMMANDS = {
    'simulate': 'models.simulate',
    'fit': 'jobs.fit',
    'summarize': 'models.summarize',
    'diagnose': 'models.diagnose',
    'validate': 'models.validate',
    'replicate': 'jobs.replicate',
}


def error_record(error):
    return json.dumps({
        'error': type(error).__name__,
        'message': str(error),
        'details': getattr(error, 'details', {}),
    }, default=str)


def usage():
    return 'usage: arlbsg {' + ','.join(SUBCOMMANDS) + '} [flags]'


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    if not argv or argv[0] not in SUBCOMMANDS:
        sys.stderr.write(usage() + '\n')
        return 2

    logging.basicConfig(level=logging.INFO,
                        format='%(asctime)s %(levelname)s %(message)s')
    subcommand, args = argv[0], argv[1:]
    try:
        module = importlib.import_module(SUBCOMMANDS[subcommand])
        module.main(args)
    except Exception as error:
        sys.stderr.write(error_record(error) + '\n')
        return 1
    return 0


if __name__ == '__main__':
    sys.exit(main())
