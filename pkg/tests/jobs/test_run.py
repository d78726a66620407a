import contextlib
import io
import json
import tempfile
import unittest
from pathlib import Path

import pandas as pd

from arlbsg.dumpers.manifest import read_manifest
from jobs.run import main
from tests.fixtures import small_config


def run(*argv):
    """Exit status and stderr of the command line"""
    err = io.StringIO()
    with contextlib.redirect_stdout(io.StringIO()), \
            contextlib.redirect_stderr(err):
        status = main(list(argv))
    return status, err.getvalue()


class CommandLineCase(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)
        self.config = self.dir / 'model.config'
        small_config().to_config_file(self.config)

    def tearDown(self):
        self.tmp.cleanup()

    def simulate(self):
        out = self.dir / 'sim'
        status, _ = run('simulate', '--n', '8', '--T', '5', '--p', '1',
                        '--seed', '11', '--out-dir', str(out))
        self.assertEqual(status, 0)
        return out

    def fit(self, data, *extra):
        out = self.dir / 'fit'
        status, err = run('fit', '--config', str(self.config),
                          '--data', str(data), '--out-dir', str(out),
                          '--iters', '12', '--burnin', '4', '--thin', '2',
                          *extra)
        self.assertEqual(status, 0, err)
        return out


class TestDispatch(CommandLineCase):

    def test_unknown_subcommand(self):
        status, err = run('train')
        self.assertEqual(status, 2)
        self.assertIn('usage', err)

    def test_no_subcommand(self):
        self.assertEqual(run()[0], 2)

    def test_bad_flag(self):
        with self.assertRaises(SystemExit) as context:
            run('fit', '--no-such-flag')
        self.assertEqual(context.exception.code, 2)

    def test_error_record(self):
        status, err = run('validate', '--config', str(self.config))
        self.assertEqual(status, 1)
        record = json.loads(err.strip().splitlines()[-1])
        self.assertEqual(record['error'], 'InvalidParameterError')
        self.assertIn('--data', record['message'])

    def test_ingestion_error_rows(self):
        panel = self.dir / 'panel.csv'
        panel.write_text('station_id,time,y,lat,lon\n'
                         'A,1,1.0,0,0\nA,1,2.0,0,0\n')
        status, err = run('validate', '--data', str(panel))
        self.assertEqual(status, 1)
        record = json.loads(err.strip().splitlines()[-1])
        self.assertEqual(record['error'], 'IngestionError')
        self.assertEqual(record['details']['rows'], [2, 3])


class TestWorkflow(CommandLineCase):

    def test_simulate(self):
        out = self.simulate()
        for name in ('panel.csv', 'truth_partitions.csv', 'truth_effects.csv',
                     'scenario.json'):
            self.assertTrue((out / name).exists(), name)
        self.assertEqual(
            len(list((out / 'truth_cocluster').glob('cocluster_t*.csv'))), 5)

    def test_validate(self):
        sim = self.simulate()
        status, _ = run('validate', '--config', str(self.config),
                        '--data', str(sim / 'panel.csv'))
        self.assertEqual(status, 0)

    def test_fit_summarize_diagnose(self):
        sim = self.simulate()
        fit = self.fit(sim / 'panel.csv', '--chains', '2')

        manifest = read_manifest(fit)
        self.assertEqual(sorted(manifest['chains']), ['chain_0', 'chain_1'])
        self.assertEqual(manifest['chains']['chain_0']['draws'], 4)
        self.assertEqual(manifest['seed'], 3)
        self.assertEqual(manifest['config']['H'], 5)
        for chain in ('chain_0', 'chain_1'):
            for name in ('draws.bin', 'last_state.pickle', 'chain.json',
                         'time.json'):
                self.assertTrue((fit / chain / name).exists(), name)
        self.assertTrue((fit / 'model.config').exists())

        status, err = run('summarize', '--run-dir', str(fit), '--truth',
                          str(sim / 'truth_partitions.csv'))
        self.assertEqual(status, 0, err)
        partitions = pd.read_csv(fit / 'partitions.csv')
        self.assertEqual(len(partitions), 8 * 5)
        self.assertEqual(partitions['cluster'].min(), 1)
        draws = pd.read_csv(fit / 'draws.csv')
        self.assertEqual(len(draws), 8)
        self.assertEqual(len(pd.read_csv(fit / 'recovery.csv')), 5)
        predictive = pd.read_csv(fit / 'predictive.csv')
        self.assertEqual(len(predictive), 5 * 100)
        self.assertTrue((predictive['lower'] <= predictive['upper']).all())
        self.assertEqual(len(list(fit.glob('cocluster_t*.csv'))), 5)

        status, err = run('diagnose', '--run-dir', str(fit))
        self.assertEqual(status, 0, err)
        criteria = pd.read_csv(fit / 'criteria.csv')
        self.assertEqual(list(criteria['criterion'][:1]), ['waic'])
        self.assertEqual(len(pd.read_csv(fit / 'pointwise.csv')), 8 * 5)
        self.assertTrue((fit / 'acceptance.csv').exists())

        timing = read_manifest(fit)['timing_minutes']
        self.assertGreater(timing['sampling_minutes'], 0.0)
        self.assertEqual(timing['postprocessing_minutes'],
                         timing['summarize_minutes'] +
                         timing['diagnose_minutes'])

    def test_resume(self):
        sim = self.simulate()
        fit = self.fit(sim / 'panel.csv')
        self.fit(sim / 'panel.csv', '--resume')
        segments = sorted(p.name for p in (fit / 'chain_0').glob('*.bin'))
        self.assertEqual(segments, ['draws.bin', 'draws_from_12.bin'])
        self.assertTrue(read_manifest(fit)['resumed'])

        status, err = run('summarize', '--run-dir', str(fit))
        self.assertEqual(status, 0, err)
        self.assertEqual(len(pd.read_csv(fit / 'draws.csv')), 4 + 4)

    def test_replicate(self):
        out = self.dir / 'study'
        status, err = run('replicate', '--config', str(self.config),
                          '--iters', '12', '--burnin', '4', '--thin', '2',
                          '--replications', '1', '--n', '8', '--T', '4',
                          '--p', '1', '--out-dir', str(out))
        self.assertEqual(status, 0, err)
        table = pd.read_csv(out / 'replicates.csv')
        self.assertEqual(len(table), 1)
        self.assertTrue((out / 'replicates_mean.csv').exists())


if __name__ == '__main__':
    unittest.main()
