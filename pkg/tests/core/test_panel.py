import unittest

import numpy as np

from arlbsg.core.errors import InvalidParameterError
from arlbsg.core.panel import EARTH_RADIUS_KM, PanelDataset, haversine


class TestHaversine(unittest.TestCase):

    def test_antipodes(self):
        dist = haversine(np.array([[0.0, 0.0]]), np.array([[0.0, 180.0]]))
        self.assertAlmostEqual(dist[0, 0], np.pi * EARTH_RADIUS_KM, places=6)
        self.assertAlmostEqual(dist[0, 0], 20015.09, delta=0.01)

    def test_one_degree_of_latitude(self):
        dist = haversine(np.array([[10.0, 5.0], [11.0, 5.0]]))
        self.assertAlmostEqual(dist[0, 1], np.pi * EARTH_RADIUS_KM / 180)

    def test_symmetric_zero_diagonal(self):
        coords = np.array([[-33.4, -70.6], [-23.6, -70.4], [-53.1, -70.9]])
        dist = haversine(coords)
        np.testing.assert_allclose(dist, dist.T)
        np.testing.assert_array_equal(np.diag(dist), 0.0)


class TestPanelDataset(unittest.TestCase):

    def setUp(self):
        y = np.array([[1.0, np.nan, 3.0], [4.0, 5.0, 6.0]])
        x = np.arange(12, dtype=float).reshape(2, 3, 2)
        self.coords = np.array([[-33.4, -70.6], [-23.6, -70.4]])
        self.data = PanelDataset(y, x=x, coords=self.coords,
                                 station_ids=['a', 'b'])

    def test_dimensions(self):
        self.assertEqual((self.data.n, self.data.T, self.data.p), (2, 3, 2))
        self.assertEqual(self.data.n_obs, 5)

    def test_unobserved(self):
        self.assertFalse(self.data.observed[0, 1])
        self.assertEqual(self.data.y_filled[0, 1], 0.0)
        np.testing.assert_array_equal(self.data.x[0, 1], 0.0)

    def test_observed_cells_row_major(self):
        np.testing.assert_array_equal(
            self.data.observed_cells,
            [[0, 0], [0, 2], [1, 0], [1, 1], [1, 2]])

    def test_immutable(self):
        with self.assertRaises(ValueError):
            self.data.y[0, 0] = 2.0

    def test_fingerprint(self):
        same = PanelDataset(self.data.y, x=self.data.x, coords=self.coords,
                            station_ids=['a', 'b'])
        other = PanelDataset(self.data.y, x=self.data.x, coords=self.coords,
                             station_ids=['a', 'c'])
        self.assertEqual(same, self.data)
        self.assertNotEqual(other.fingerprint, self.data.fingerprint)

    def test_labels(self):
        self.assertEqual(self.data.time_labels, ('1', '2', '3'))
        self.assertEqual(self.data.covariate_names, ('x1', 'x2'))

    def test_check_passes(self):
        self.assertEqual(self.data.check(), [])

    def test_check_no_observation(self):
        data = PanelDataset(np.full((2, 2), np.nan))
        self.assertIn('panel has no observed cell', data.check())

    def test_bad_mask_shape(self):
        with self.assertRaises(InvalidParameterError):
            PanelDataset(np.ones((2, 3)), observed=np.ones((3, 2)))

    def test_bad_covariates_shape(self):
        with self.assertRaises(InvalidParameterError):
            PanelDataset(np.ones((2, 3)), x=np.ones((2, 3)))


if __name__ == '__main__':
    unittest.main()
