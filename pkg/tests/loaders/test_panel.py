import tempfile
import unittest
from pathlib import Path

import numpy as np

from arlbsg.core.errors import IngestionError
from arlbsg.dumpers.panel import write_panel_csv
from arlbsg.dumpers.summaries import write_partitions
from arlbsg.loaders.panel import apply_transforms, circular_encoding, \
    load_panel_csv, load_partitions_csv
from tests.fixtures import small_scenario

HEADER = 'station_id,time,y,lat,lon,wind\n'


class PanelCsvCase(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def write(self, body, header=HEADER, name='panel.csv'):
        path = self.dir / name
        path.write_text(header + body)
        return path

    def assertRows(self, body, rows, header=HEADER):
        path = self.write(body, header)
        with self.assertRaises(IngestionError) as context:
            load_panel_csv(path)
        self.assertEqual(context.exception.rows, rows)
        return context.exception


class TestCircularEncoding(unittest.TestCase):

    def test_right_angle(self):
        sin, cos = circular_encoding(90.0)
        self.assertAlmostEqual(sin, 1.0)
        self.assertAlmostEqual(cos, 0.0)

    def test_full_turn(self):
        first = circular_encoding([0.0, 45.0])
        second = circular_encoding([360.0, 405.0])
        np.testing.assert_allclose(first, second, atol=1e-12)


class TestApplyTransforms(unittest.TestCase):

    def test_names_and_values(self):
        values, names = apply_transforms(
            {'wind': np.array([0.0, 90.0]), 'temp': np.array([2.0, 3.0])},
            angle_columns=['wind'], square_columns=['temp'],
            interactions=[('temp', 'wind_sin')])
        self.assertEqual(names, ['wind_sin', 'wind_cos', 'temp', 'temp_sq',
                                 'temp_x_wind_sin'])
        np.testing.assert_allclose(values['temp_sq'], [4.0, 9.0])
        np.testing.assert_allclose(values['temp_x_wind_sin'], [0.0, 3.0],
                                   atol=1e-12)

    def test_unknown_column(self):
        with self.assertRaises(IngestionError):
            apply_transforms({'temp': np.zeros(2)}, square_columns=['rain'])


class TestLoadPanel(PanelCsvCase):

    def test_round_trip(self):
        data, _ = small_scenario(n=6, T=4, p=2)
        path = write_panel_csv(data, self.dir / 'panel.csv')
        loaded = load_panel_csv(path)
        self.assertEqual(loaded.station_ids, data.station_ids)
        self.assertEqual(loaded.time_labels, data.time_labels)
        self.assertEqual(loaded.covariate_names, data.covariate_names)
        np.testing.assert_allclose(loaded.y, data.y)
        np.testing.assert_allclose(loaded.x, data.x)
        np.testing.assert_allclose(loaded.coords, data.coords)

    def test_monthly_with_gaps(self):
        path = self.write(
            'A,2020-11,1.0,-33.4,-70.6,10\n'
            'A,2021-02,2.0,-33.4,-70.6,20\n'
            'B,2020-12,,-36.8,-73.0,\n'
            'B,2021-01,3.0,-36.8,-73.0,30\n')
        data = load_panel_csv(path)
        self.assertEqual(data.time_labels,
                         ('2020-11', '2020-12', '2021-01', '2021-02'))
        np.testing.assert_array_equal(
            data.observed, [[True, False, False, True],
                            [False, False, True, False]])
        self.assertEqual(data.y[0, 3], 2.0)
        self.assertEqual(data.x[1, 2, 0], 30.0)

    def test_integer_times(self):
        path = self.write('A,2,1.0,0,0,1\nA,6,2.0,0,0,1\nA,4,1.5,0,0,1\n')
        data = load_panel_csv(path)
        self.assertEqual(data.time_labels, ('2', '4', '6'))
        np.testing.assert_allclose(data.y[0], [1.0, 1.5, 2.0])

    def test_angle_covariate(self):
        path = self.write('A,1,1.0,0,0,90\nA,2,1.0,0,0,0\n')
        data = load_panel_csv(path, angle_columns=['wind'])
        self.assertEqual(data.covariate_names, ('wind_sin', 'wind_cos'))
        np.testing.assert_allclose(data.x[0, :, 0], [1.0, 0.0], atol=1e-12)

    def test_missing_column(self):
        path = self.write('A,1,1.0,0,1\n', header='station_id,time,y,lon,w\n')
        with self.assertRaises(IngestionError) as context:
            load_panel_csv(path)
        self.assertIn('lat', str(context.exception))

    def test_duplicates(self):
        self.assertRows('A,1,1.0,0,0,1\nA,1,2.0,0,0,1\nB,1,2.0,1,1,1\n',
                        [2, 3])

    def test_bad_month(self):
        self.assertRows('A,2020-01,1.0,0,0,1\nA,2020-13,1.0,0,0,1\n', [3])

    def test_mixed_times(self):
        self.assertRows('A,2020-01,1.0,0,0,1\nA,2020-02,1.0,0,0,1\n'
                        'A,3,1.0,0,0,1\n', [4])

    def test_unparseable_y(self):
        self.assertRows('A,1,abc,0,0,1\nA,2,1.0,0,0,1\n', [2])

    def test_empty_covariate_on_observed_row(self):
        self.assertRows('A,1,1.0,0,0,\nA,2,1.0,0,0,1\n', [2])

    def test_station_without_observations(self):
        self.assertRows('A,1,1.0,0,0,1\nB,1,,1,1,1\n', [3])

    def test_several_coordinates(self):
        self.assertRows('A,1,1.0,0,0,1\nA,2,1.0,5,0,1\n', [2, 3])


class TestLoadPartitions(PanelCsvCase):

    def test_round_trip(self):
        data, truth = small_scenario(n=6, T=4)
        path = write_partitions(truth.partitions, data.station_ids,
                                data.time_labels, self.dir / 'truth.csv')
        np.testing.assert_array_equal(load_partitions_csv(path, data),
                                      truth.partitions)

    def test_incomplete(self):
        data, truth = small_scenario(n=6, T=4)
        path = self.write('time,station_id,cluster\n1,S001,1\n', header='')
        with self.assertRaises(IngestionError):
            load_partitions_csv(path, data)

    def test_unknown_station(self):
        data, _ = small_scenario(n=6, T=4)
        path = self.write('time,station_id,cluster\n1,Z999,1\n', header='')
        with self.assertRaises(IngestionError) as context:
            load_partitions_csv(path, data)
        self.assertEqual(context.exception.rows, [2])


if __name__ == '__main__':
    unittest.main()
