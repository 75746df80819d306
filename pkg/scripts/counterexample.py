"""Why the relaxation needs perturbed costs.

On c = (4, 7, 5, 0, 0, 5, 8, 5) with delta = 2 and k = 3 no integer
multiplier makes the unperturbed relaxation return exactly three indices,
whichever way ties go. The perturbed solver still finds the optimum.
"""
from sepsparse.core import ProjectionInstance
from sepsparse.lagrangian import LagrangianQuery, lassp, proj_lagr
from sepsparse.wide import WideArray

C = (4, 7, 5, 0, 0, 5, 8, 5)
DELTA, K = 2, 3


def main():
    cw = WideArray(C)
    print("lam  strict  ties  value")
    for lam in range(0, max(C) + 1):
        q = LagrangianQuery(cw, DELTA, lam)
        s1, v = proj_lagr(q)
        s2, _ = proj_lagr(q, take_ties=True)
        print(f"{lam:3d}  {str(s1.indices):12s} {str(s2.indices):16s} {v}")
    res = lassp(ProjectionInstance(C, K, DELTA), rng=0)
    print(f"lassp: support={res.support.indices} value={res.value} iterations={res.iterations}")


if __name__ == "__main__":
    main()
