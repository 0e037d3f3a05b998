"""Map the optimized second-order correction over the engine's control plane.

The natural axes are dimensionless: x = lam_B / T2 fixes how quantum the hot
endpoint is, y = lam_D / T1 the cold one; a working engine needs x < y.
Three features of the landscape stand out, and each row of printed numbers
shows one:

  * approaching the x = y boundary the correction magnitude blows up
    (the denominator of the closed form is the shrinking cycle area),
  * for x, y both large the populations freeze into the ground state and
    the correction dies away (effectively a two-level engine, which pays
    no second-order penalty at all),
  * for x -> 0 at fixed y the correction saturates at a plateau.
"""

import io
import csv
import warnings

from sixstroke import (
    SpectrumModel,
    SweepAxis,
    SweepSpec,
    TruncationWarning,
    run_sweep,
    sweep_csv,
)

warnings.filterwarnings("ignore", category=TruncationWarning)

model = SpectrumModel.from_text("n + 1", "(n + 1)^2", alpha=0.01, levels=5)


def corrections(xs, ys):
    spec = SweepSpec(axis_b=SweepAxis.explicit(xs), axis_d=SweepAxis.explicit(ys))
    table = {}
    text = sweep_csv(run_sweep(model, 1.0, 2.0, spec))
    for row in csv.DictReader(io.StringIO(text)):
        if row["valid_flag"] == "true":
            key = (float(row["beta2_lambda_b"]), float(row["beta1_lambda_d"]))
            table[key] = float(row["eta_correction_f21"])
    return table


print("1. blow-up toward the x = y boundary (row y = 2):")
xs = [0.5, 1.0, 1.5, 1.8, 1.9, 1.95, 1.99]
table = corrections(xs, [2.0])
for x in xs:
    print(f"   x = {x:5.2f}   correction = {table[(x, 2.0)]: .6e}")

print("\n2. freeze-out when both endpoints go deep (diagonal y = 2x):")
xs = [2.0, 4.0, 8.0, 16.0, 32.0]
table = corrections(xs, [2 * x for x in xs])
for x in xs:
    print(f"   x = {x:5.1f}, y = {2 * x:5.1f}   correction = {table[(x, 2 * x)]: .6e}")

print("\n3. small-x plateau (row y = 3):")
xs = [1.0, 0.3, 0.1, 0.03, 0.01, 0.003, 0.001]
table = corrections(sorted(xs), [3.0])
for x in xs:
    print(f"   x = {x:7.3f}   correction = {table[(x, 3.0)]: .9e}")

# the same grid, as the CLI writes it: one CSV row per cell, invalid cells
# (x >= y) flagged false and left blank
print("\nraw CSV for a tiny 3x2 grid:")
spec = SweepSpec(
    axis_b=SweepAxis.explicit([0.5, 1.0, 2.5]),
    axis_d=SweepAxis.explicit([2.0, 3.0]),
)
print(sweep_csv(run_sweep(model, 1.0, 2.0, spec)))
