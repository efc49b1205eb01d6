import unittest

import numpy as np
from sklearn.decomposition import PCA

from latentlift.analysis import LatentDump, pca_project


class PCATestCase(unittest.TestCase):
    def plane(self, n: int = 200) -> np.ndarray:
        rng = np.random.default_rng(3)
        basis, _ = np.linalg.qr(rng.normal(size=(10, 2)))
        coefficients = rng.normal(size=(n, 2)) * np.array([3.0, 1.0])
        return coefficients @ basis.T + rng.normal(size=10)

    def test_plane_variance(self):
        projection = pca_project(self.plane(), n_components=2)
        self.assertEqual(projection.n_components, 2)
        self.assertGreaterEqual(projection.explained_variance_ratio.sum(), 0.999)
        self.assertGreater(projection.explained_variance[0], projection.explained_variance[1])

    def test_reconstruction(self):
        rows = self.plane()
        projection = pca_project(rows, n_components=2)
        np.testing.assert_allclose(projection.reconstruct(), rows, atol=1e-10)

    def test_unit_axes_and_signs(self):
        projection = pca_project(self.plane(), n_components=2)
        np.testing.assert_allclose(np.linalg.norm(projection.components, axis=1), 1.0)
        pivots = np.argmax(np.abs(projection.components), axis=1)
        self.assertTrue(np.all(projection.components[np.arange(2), pivots] > 0))

    def test_agrees_with_sklearn(self):
        rows = self.plane(60)
        reference = PCA(n_components=2).fit(rows)
        projection = pca_project(rows, n_components=2)
        np.testing.assert_allclose(projection.explained_variance, reference.explained_variance_, rtol=1e-8)
        np.testing.assert_allclose(projection.explained_variance_ratio, reference.explained_variance_ratio_,
                                   rtol=1e-8)
        np.testing.assert_allclose(np.abs(projection.components), np.abs(reference.components_), atol=1e-8)
        np.testing.assert_allclose(projection.mean, reference.mean_)

    def test_dump_input(self):
        rows = self.plane(50)
        dump = LatentDump(true_state=np.zeros((50, 2)), latent=rows, reward=np.zeros(50))
        np.testing.assert_allclose(pca_project(dump).projected, pca_project(rows).projected)

    def test_collapsed(self):
        with self.assertWarns(UserWarning):
            projection = pca_project(np.ones((20, 4)), n_components=2)
        self.assertEqual(projection.n_components, 0)
        self.assertEqual(projection.projected.shape, (20, 0))

    def test_too_few_rows(self):
        with self.assertWarns(UserWarning):
            projection = pca_project(np.ones((1, 3)))
        self.assertEqual(projection.n_components, 0)

    def test_bad_input(self):
        with self.assertRaises(ValueError):
            pca_project(np.ones(5))
        with self.assertRaises(ValueError):
            pca_project(np.ones((5, 2)), n_components=0)
