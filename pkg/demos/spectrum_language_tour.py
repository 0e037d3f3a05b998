"""Tour of the little expression language that defines level ladders.

Spectra are written as closed-form expressions in the level index n, one for
the bare ladder f and one for the deformation g; the medium's energies are
E_n = lam * f(n) + alpha * g(n).  The grammar covers + - * / ^ (right
associative), unary minus, parentheses, floats, and the functions exp, log
and sqrt.
"""

import numpy as np

from sixstroke import (
    DegenerateSpectrumError,
    ExpressionError,
    SpectrumModel,
    energy_levels,
    eval_levels,
    expr_to_text,
    parse_level_expr,
    perturbation_ratio,
)

SAMPLES = [
    "n + 1",                       # the harmonic-oscillator-like ladder
    "(n + 1)^2",                   # particle in a box
    "sqrt(n * (n + 1))",           # rotor-ish
    "2^n",                         # exponentially opening gaps
    "1 - 1 / (n + 1)^2",           # hydrogen-like, bounded
    "log(n + 2) * exp(-0.5 * n)",  # no one said it has to be pretty
]

for text in SAMPLES:
    expr = parse_level_expr(text)
    values = eval_levels(expr, 6)
    rendered = ", ".join(f"{v:.4f}" for v in values)
    print(f"{text:22} -> [{rendered}]")

# the parser reports errors as byte offsets into the source text
print("\nwhat rejection looks like:")
for bad in ["n + ", "3 * floor(n)", "n ^ ^ 2", "(n + 1"]:
    try:
        parse_level_expr(bad)
    except ExpressionError as exc:
        caret = " " * exc.offset + "^"
        print(f"  {bad!r}: {exc}")
        print(f"     {bad}")
        print(f"     {caret}")

# expressions round-trip through a minimal-parentheses printer
expr = parse_level_expr("-(n + 1) * 2^(n / 3) - 4")
print(f"\nround-trip: {expr_to_text(expr)!r}")
assert parse_level_expr(expr_to_text(expr)) == expr

# a model glues f and g together and validates them: f values must be
# distinct, else lam cannot separate the levels it multiplies
try:
    SpectrumModel.from_text("(n - 2)^2", "n", alpha=0.01, levels=4)
except DegenerateSpectrumError as exc:
    print(f"\ndegenerate f rejected: {exc}")

# perturbation_ratio gauges how large alpha*g is against the lam*f gaps;
# past ~1 the 'small deformation' story stops making sense
model = SpectrumModel.from_text("n + 1", "(n + 1)^2", alpha=0.01, levels=5)
print(f"\nE_n at lam = 1: {np.round(energy_levels(model, 1.0), 4)}")
for lam in (1.0, 0.1, 0.02):
    print(f"perturbation_ratio(lam={lam:4}) = {perturbation_ratio(model, lam):.3f}")
