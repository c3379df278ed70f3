#!/usr/bin/env python3
"""Where the phase certificates hold -- and where they provably fail.

The counting machinery is only correct in the regime where each
biclique ground state is a dominant, nearly-frozen phase of the tree
recursion.  The phases module decides that analytically, with no
sampling involved.  Three sweeps:

  1. proper 4-colorings across degrees: the two-value fixpoint exists,
     its off-phase mass b' is tiny, and the recursion's linearization
     is contractive -- the certificate holds at every listed degree;
  2. the failure window: once q grows past 4*degree/ln(degree), the
     same fixpoint stops being frozen (b' blows past 1/(degree*q)) and
     the certificate correctly refuses;
  3. hard-core: the tree uniqueness threshold lambda_c collapses like
     e/degree, and the asymmetric occupied/unoccupied pair is dominant
     at large degree while small-degree symmetric fixpoints are not.

All closed-form or Newton solves; runs in under a second.
"""

from bipolymer import phases

COLORING_DEGREES = (170, 200, 300, 556, 1000)
FAILURE_PAIRS = ((88, 100), (90, 100), (120, 130))
HARDCORE_DEGREES = (3, 10, 50, 200, 1000)


def main():
    print("proper 4-colorings, dominance certificate by degree:")
    print(f"{'degree':>8}{'b_prime':>13}{'threshold':>13}"
          f"{'2nd singular':>14}{'1/(deg-1)':>12}{'verdict':>9}")
    for degree in COLORING_DEGREES:
        rep = phases.verify_coloring_maximality(4, degree)
        print(f"{degree:>8}{rep.b_prime:>13.3e}{rep.b_prime_threshold:>13.3e}"
              f"{rep.spectrum[1]:>14.3e}{1/(degree-1):>12.3e}"
              f"{str(rep.verdict):>9}")

    print("\nfailure window (q just above 4*degree/ln(degree)):")
    print(f"{'q':>6}{'degree':>8}{'b_prime':>13}{'1/(deg*q)':>12}"
          f"{'frozen?':>9}")
    for q, degree in FAILURE_PAIRS:
        rep = phases.verify_coloring_failure(q, degree)
        frozen = not rep.verdict  # verdict=True certifies the failure
        print(f"{q:>6}{degree:>8}{rep.b_prime:>13.3e}"
              f"{rep.b_prime_threshold:>12.3e}{str(frozen):>9}")

    print("\nhard-core tree uniqueness threshold:")
    print(f"{'degree':>8}{'lambda_c':>12}{'e/degree':>12}")
    for degree in HARDCORE_DEGREES:
        lc = phases.hardcore_lambda_c(degree)
        print(f"{degree:>8}{lc:>12.5f}{2.718281828/degree:>12.5f}")

    print("\nhard-core dominance at two sample points:")
    rep = phases.hardcore_fixpoint_report(50, 1.0, which="asymmetric")
    print(f"  degree=50 lambda=1 asymmetric pair: 2nd singular "
          f"{rep.spectrum[1]:.3e} < 1/49 -> dominant={rep.hessian_dominant}")
    rep = phases.hardcore_fixpoint_report(3, 5.0, which="symmetric")
    print(f"  degree=3 lambda=5 symmetric pair:   2nd singular "
          f"{rep.spectrum[1]:.3e} vs 1/2   -> dominant={rep.hessian_dominant}")


if __name__ == "__main__":
    main()
