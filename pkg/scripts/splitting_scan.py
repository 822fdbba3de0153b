"""Scan hypergeometric parameters and report splitting type, exponents and bounds.

For each (alpha, beta, gamma) the system is reduced to exponents in [0, 1) at
the finite points, the splitting type is read from the transition function,
and its weight is compared with the bound from the apparent-singularity count.
"""

import argparse
import itertools

from rhsplit import bundle_calculus as bc
from rhsplit.errors import RHSplitError
from rhsplit.fixtures import hypergeometric_system
from rhsplit.fuchsian.monodromy import monodromy
from rhsplit.fuchsian.reduction import splitting_via_reduction
from rhsplit.fuchsian.scalarize import count_wronskian_zeros, scalarize


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--values", type=float, nargs="*", default=[0.15, 0.3, 0.45, 0.7])
    args = p.parse_args()
    print(f"{'alpha':>6} {'beta':>6} {'gamma':>6}  {'K':>8}  tau  bound  zeros  defect")
    for a, b, c in itertools.product(args.values, repeat=3):
        sysm = hypergeometric_system(a, b, c)
        try:
            K = splitting_via_reduction(sysm).as_list()
            zeros = count_wronskian_zeros(scalarize(sysm, 0), 5.0)
            defect = monodromy(sysm).relation_defect
        except RHSplitError as exc:
            print(f"{a:6.2f} {b:6.2f} {c:6.2f}  skipped: {exc}")
            continue
        bound = bc.partial_index_bound(2, 3, zeros)
        print(f"{a:6.2f} {b:6.2f} {c:6.2f}  {str(K):>8}  {bc.weight_tau(K):3d}  {bound:5d}  {zeros:5d}  {defect:.1e}")


if __name__ == "__main__":
    main()
