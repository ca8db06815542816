import pytest

from conic_census.errors import DomainError
from conic_census.verify import (
    CheckResult,
    SUITES,
    admissible_detector_triples,
    mod16_triples,
    random_detector_triples,
    reciprocity_cases,
    reduced_conics,
    run_suite,
    suite_assembly,
    suite_densities,
    suite_detectors,
    suite_hilbert,
    suite_selberg,
)


def test_line_format():
    assert CheckResult("s", "n", True, 3, 0).line() == "PASS s.n checked=3 failures=0"
    assert CheckResult("s", "n", False, 3, 1, "x=1").line() == "FAIL s.n checked=3 failures=1 x=1"


def test_generator_sizes():
    assert len(list(mod16_triples())) == 1280
    small = list(admissible_detector_triples(30))
    assert (1, 1, 3) in small and (1, 1, 1) not in small and (2, 2, 3) not in small
    assert len(list(random_detector_triples(25))) == 25
    assert list(random_detector_triples(5)) == list(random_detector_triples(5))
    conics = list(reduced_conics(6))
    assert (1, -1, -1) in conics and all(c[0] > 0 for c in conics)
    assert len(list(reciprocity_cases(10))) == 10


def test_hilbert_suite_small():
    res = suite_hilbert(pairs=2000, bound=10**4)
    assert all(r.passed for r in res)
    assert res[0].checked == 2000


def test_detector_suite_small():
    res = suite_detectors(limit=200, random_count=200, holzer_limit=150)
    assert [r.name for r in res] == [
        "indicator_exhaustive", "jacobi_identity", "indicator_random",
        "holzer_oracle", "main_error_decomposition", "reciprocity_rearrangement",
    ]
    assert all(r.passed for r in res), [r.line() for r in res if not r.passed]


def test_density_suite():
    res = suite_densities()
    assert all(r.passed for r in res)
    assert any(r.name == "conic_p2_is_49/48" for r in res)


def test_assembly_suite():
    assert all(r.passed for r in suite_assembly(prime_bound=10**5))


def test_selberg_suite_small():
    res = suite_selberg(xs=(10**4, 10**5), progressions=((4, 1, 1), (4, 3, 5)))
    assert all(r.passed for r in res)


def test_failure_reporting():
    res = run_suite("selberg", xs=(10**4,), progressions=((4, 1, 1),), tol=1e-9)
    assert not res[0].passed and res[0].line().startswith("FAIL")


def test_registry():
    assert set(SUITES) == {"hilbert", "detectors", "densities", "assembly", "selberg"}
    with pytest.raises(DomainError):
        run_suite("nope")
