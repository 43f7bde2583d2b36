"""Entanglement produced by the CNOT gate on (|0> + |1>)_C |0>_T."""

import argparse

from qigate import cnot_spec, entanglement_demo


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--eta", type=float, default=1.0)
    args = parser.parse_args()
    for n in (10, 50, 100, 1000, 10_000):
        print(f"N={n:>6}  concurrence={entanglement_demo(cnot_spec(n, args.eta)):.9f}")


if __name__ == "__main__":
    main()
