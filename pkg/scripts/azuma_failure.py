"""Explosion profile of the Azuma layout, one line per basis input."""

import argparse

from qigate import azuma_spec, explosion_profile


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("-n", "--stages", type=int, default=25)
    parser.add_argument("--eta", type=float, default=1.0)
    args = parser.parse_args()

    spec = azuma_spec(args.stages, args.eta)
    for label in ("00", "01", "10", "11"):
        prof = explosion_profile(spec, label)
        flag = "FORBIDDEN" if prof.forbidden else ""
        print(f"|{label[0]}>_C|{label[1]}>_T  first={prof.stage_probs[0]:.6f}  total={prof.total:.6f}  {flag}")


if __name__ == "__main__":
    main()
