"""Vectorized campaign kernels against the scalar reference implementations."""

import numpy as np
import pytest

from vandermetric import (
    MultilinearMapSpec,
    ResourceError,
    extended_inequality_gap,
    generalized_metric,
    permutation_expansion,
    product_difference_form,
    root_metric,
    simplex_gap,
    sum_identity_gap,
    vandermonde_metric,
    w_identity_gap,
)
from vandermetric import batch

RTOL = 1e-12


def close(a, b):
    return abs(a - b) <= RTOL * max(abs(a), abs(b), 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(71)


class TestComplexKernels:
    def test_dv_batch_matches_scalar(self, rng):
        z = rng.standard_normal((50, 5)) + 1j * rng.standard_normal((50, 5))
        values = batch.dv_batch(z)
        for row, v in zip(z, values):
            assert close(v, vandermonde_metric(list(row)))

    def test_root_batch_matches_scalar(self, rng):
        z = rng.standard_normal((50, 4)) + 1j * rng.standard_normal((50, 4))
        values = batch.root_batch(z)
        for row, v in zip(z, values):
            assert close(v, root_metric(list(row)))

    def test_simplex_sides_match_reports(self, rng):
        z = rng.standard_normal((30, 4)) + 1j * rng.standard_normal((30, 4))
        y = rng.standard_normal(30) + 1j * rng.standard_normal(30)
        lhs, rhs = batch.simplex_sides_complex(z, y)
        for t in range(30):
            report = simplex_gap(list(z[t]), complex(y[t]))
            assert close(lhs[t], report.lhs)
            assert close(rhs[t], report.rhs)

    def test_extended_sides_match_reports(self, rng):
        z = rng.standard_normal((20, 4)) + 1j * rng.standard_normal((20, 4))
        y = rng.standard_normal(20) + 1j * rng.standard_normal(20)
        for k in range(4):
            lhs, rhs = batch.extended_sides_complex(z, y, k)
            for t in range(20):
                report = extended_inequality_gap(list(z[t]), complex(y[t]), k)
                assert close(lhs[t], report.lhs)
                assert close(rhs[t], report.rhs)


class TestVectorKernels:
    def test_pairwise_product_batch(self, rng):
        from vandermetric import pairwise_product_metric
        x = rng.standard_normal((40, 4, 3))
        values = batch.pairwise_product_batch(x)
        for rows, v in zip(x, values):
            assert close(v, pairwise_product_metric([tuple(p) for p in rows]))

    def test_generalized_metric_batch(self, rng):
        x = rng.standard_normal((40, 4, 3))
        spec = MultilinearMapSpec(n=4, m=3)
        values = batch.generalized_metric_batch(x)
        for rows, v in zip(x, values):
            assert close(v, generalized_metric(spec, [tuple(p) for p in rows]))


class TestMultilinearKernels:
    def test_pdf_batch_matches_scalar(self, rng):
        x = rng.standard_normal((30, 4, 3))
        spec = MultilinearMapSpec(n=4, m=3)
        re, im = batch.pdf_batch(x)
        for t in range(30):
            ref = product_difference_form(spec, [tuple(p) for p in x[t]])
            assert np.allclose(re[t], ref[0::2], rtol=RTOL, atol=RTOL)
            assert np.allclose(im[t], ref[1::2], rtol=RTOL, atol=RTOL)

    def test_expansion_batch_matches_scalar(self, rng):
        x = rng.standard_normal((10, 3, 3))
        spec = MultilinearMapSpec(n=3, m=3)
        re, im = batch.expansion_batch(x)
        for t in range(10):
            ref = permutation_expansion(spec, [tuple(p) for p in x[t]])
            scale = max(float(np.max(np.abs(ref))), 1.0)
            assert np.max(np.abs(re[t] - ref[0::2])) <= 1e-10 * scale
            assert np.max(np.abs(im[t] - ref[1::2])) <= 1e-10 * scale

    def test_expansion_batch_size_limit(self, rng):
        x = rng.standard_normal((2, 9, 2))
        with pytest.raises(ResourceError):
            batch.expansion_batch(x)

    def test_int64_arithmetic_is_exact(self, rng):
        x = rng.integers(-3, 4, size=(200, 5, 3)).astype(np.int64)
        er, ei = batch.expansion_batch(x)
        pr, pi = batch.pdf_batch(x)
        assert np.array_equal(er, pr)
        assert np.array_equal(ei, pi)

    def test_sum_identity_sides(self, rng):
        x = rng.uniform(-1, 1, size=(20, 4, 3))
        y = rng.uniform(-1, 1, size=(20, 3))
        spec = MultilinearMapSpec(n=4, m=3)
        lhs, rhs = batch.sum_identity_sides(x, y)
        gaps, _ = batch.max_gap_and_scale(lhs, rhs)
        for t in range(20):
            ref = sum_identity_gap(spec, [tuple(p) for p in x[t]], tuple(y[t]))
            assert abs(gaps[t] - ref) <= 1e-12

    def test_w_identity_sides(self, rng):
        x = rng.uniform(-1, 1, size=(20, 3, 3))
        y = rng.uniform(-1, 1, size=(20, 3))
        for q in (1, 2, 3):
            spec = MultilinearMapSpec(n=3, m=3, extra=q - 1)
            lhs, rhs = batch.w_identity_sides(x, y, q)
            gaps, _ = batch.max_gap_and_scale(lhs, rhs)
            for t in range(20):
                ref = w_identity_gap(spec, [tuple(p) for p in x[t]], tuple(y[t]), q)
                assert abs(gaps[t] - ref) <= 1e-12
