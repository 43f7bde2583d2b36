"""Gate error of the CZ gate over a grid of scattering efficiency and stage count.

Weak scattering can be offset by more stages; this prints
1 - post-selected process fidelity and the worst basis success.
"""

import argparse

from qigate import cz_spec, gate_metrics


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--etas", default="0.1,0.25,0.5,0.75,1.0")
    parser.add_argument("--stages", default="20,40,100,400,1000,4000")
    parser.add_argument("--crossings", type=int, default=1)
    args = parser.parse_args()

    etas = [float(x) for x in args.etas.split(",")]
    stages = [int(x) for x in args.stages.split(",")]
    print("eta    " + "".join(f"{n:>22}" for n in stages))
    for eta in etas:
        cells = []
        for n in stages:
            m = gate_metrics(cz_spec(n, eta, args.crossings))
            cells.append(f"{1 - m.postselected_process_fidelity:9.2e} / {m.worst_case_basis_success:8.5f}")
        print(f"{eta:<6} " + "".join(f"{c:>22}" for c in cells))


if __name__ == "__main__":
    main()
