"""
Bias against the central L-value
================================

A large value of L(q^-1/2) means a small constant term in the model, which
means a small bias.  Scanning every squarefree modulus of a fixed degree shows
the trend as a rank correlation.
"""

import sys

from scipy.stats import spearmanr

from ffbias import FieldSpec
from ffbias.cli import scan

q = int(sys.argv[1]) if len(sys.argv) > 1 else 5
for degree in (3, 4):
    rows = scan(FieldSpec(q), degree)
    ok = [r for r in rows if r["gsh_verdict"] == "plausible"]
    rho = spearmanr([r["central_value"] for r in ok], [r["delta_plus_nc"] - 0.5 for r in ok]).statistic
    print(f"q={q} degree {degree}: {len(rows)} moduli, {len(ok)} GSH-plausible, spearman {rho:+.3f}")
    for r in (ok[0], ok[len(ok) // 2], ok[-1]):
        print(f"    {r['modulus']:<16} L(q^-1/2) = {r['central_value']:8.4f}   delta_+ = {r['delta_plus_nc']:.4f}")
