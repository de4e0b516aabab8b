"""Acceptance gate: runs every check of the verification harness at its
stated tolerance and prints one pass/fail line per criterion."""

import pytest

from towerdimer import verify

NAMES = {
    1: "partition_function_exact",
    2: "kernel_matches_exact_inverse",
    3: "kernel_boundary_vanishing",
    4: "sampler_matches_boltzmann",
    5: "bijection_preserves_weights",
    6: "bulk_probabilities_converge",
    7: "critical_point_residuals",
    8: "slope_map_identities",
    9: "current_from_kernel",
    10: "hydrodynamic_identity",
    11: "isoradial_embedding",
    12: "frozen_degeneracy",
}


@pytest.mark.parametrize("criterion", sorted(verify.CHECKS), ids=lambda c: f"{c:02d}_{NAMES[c]}")
def test_acceptance(criterion, capsys):
    result = verify.CHECKS[criterion]()
    with capsys.disabled():
        print(result.line())
    assert result.passed, result.line()
