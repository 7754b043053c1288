#!/usr/bin/env python3
"""Build the optional case-study datasets expected by the gated tests.

The two datasets are not bundled (licensing); this script documents exactly
how to derive them from their public sources and, if you have R available,
does so for you.  Output goes to ./data/ (or --out DIR):

  data/insurance.csv   1500 general-liability claims, 34 right-censored.
      Source: the `loss` data frame in the R package `copula` (originally the
      US Insurance Services Office).  Columns used: z = loss (claim amount),
      delta = 1 - censored.  Row order is kept as shipped.

  data/aids.csv        2754 male Australian AIDS patients.
      Source: the `Aids2` data frame in the R package `MASS` (Dr P. J.
      Solomon and the Australian National Centre in HIV Epidemiology and
      Clinical Research; diagnoses before 1991-07-01).  Preprocessing
      assumptions (documented here because the analyses in the literature
      differ in detail):
        * keep sex == "M" only (2754 of 2843 records);
        * survival time z = death - diag + 1 in days (the +1 keeps z > 0 for
          patients diagnosed at death);
        * delta = 1 if status == "D" (death observed), else 0;
        * row order as shipped.

Usage:
    python scripts/fetch_data.py [--out data]

Requires Rscript with the `copula` and `MASS` packages installed; without R,
run the embedded R snippets by hand and place the CSVs in ./data/.
"""

import argparse
import os
import shutil
import subprocess
import sys

R_SNIPPET = r"""
suppressMessages({library(copula); library(MASS)})
data(loss, package = "copula")
ins <- data.frame(z = loss$loss, delta = 1L - loss$censored)
write.csv(ins, file.path("%(out)s", "insurance.csv"), row.names = FALSE, quote = FALSE)

data(Aids2, package = "MASS")
male <- Aids2[Aids2$sex == "M", ]
aids <- data.frame(z = as.numeric(male$death) - as.numeric(male$diag) + 1,
                   delta = as.integer(male$status == "D"))
write.csv(aids, file.path("%(out)s", "aids.csv"), row.names = FALSE, quote = FALSE)
cat(nrow(ins), nrow(aids), "\n")
"""


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="data", help="output directory (default ./data)")
    args = parser.parse_args()
    os.makedirs(args.out, exist_ok=True)
    if shutil.which("Rscript") is None:
        sys.stderr.write(
            "Rscript not found. Install R with the 'copula' and 'MASS' packages and\n"
            "re-run, or execute the R snippet from this file's docstring manually.\n"
        )
        return 1
    script = R_SNIPPET % {"out": args.out}
    proc = subprocess.run(["Rscript", "-e", script], capture_output=True, text=True)
    sys.stderr.write(proc.stderr)
    if proc.returncode != 0:
        return proc.returncode
    print(f"wrote {args.out}/insurance.csv and {args.out}/aids.csv")
    return 0


if __name__ == "__main__":
    sys.exit(main())
