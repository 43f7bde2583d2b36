"""Interrogation success versus number of stages.

Prints the exact success probability for the classical bomb (theta = pi/2N)
and the CZ gate's interrogated input (theta = pi/N) next to their
first-order estimates.
"""

import argparse
import math

from qigate import GateSpec, QubitStateVector, encode_qubits, run_classical_qi, run_joint_protocol


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-power", type=int, default=12, help="largest N is 2**max_power")
    args = parser.parse_args()

    psi = encode_qubits(QubitStateVector.basis("01"))
    print(f"{'N':>6} {'bomb P':>14} {'1-pi^2/4N':>14} {'CZ P(01)':>14} {'1-pi^2/N':>14} {'1-pi^2/N^2':>14}")
    for k in range(2, args.max_power + 1):
        n = 2**k
        bomb = run_classical_qi(n, math.pi / (2 * n), True).success_prob
        cz = run_joint_protocol(GateSpec(n), psi).success_prob
        print(f"{n:>6} {bomb:>14.10f} {1 - math.pi**2 / (4 * n):>14.10f} "
              f"{cz:>14.10f} {1 - math.pi**2 / n:>14.10f} {1 - math.pi**2 / n**2:>14.10f}")


if __name__ == "__main__":
    main()
