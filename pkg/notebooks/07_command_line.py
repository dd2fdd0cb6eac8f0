# ---
# jupyter:
#   jupytext:
#     formats: py:light
#     text_representation:
#       extension: .py
#       format_name: light
#       format_version: '1.5'
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# # Command line and model files
#
# The same checks are available as ``python -m dynhopf check``.

from pathlib import Path

from dynhopf.__main__ import main
from dynhopf.cli_io import load_model, run_suite

models = Path("models") if Path("models").exists() else Path(__file__).resolve().parent.parent / "models"

rep = run_suite(load_model(str(models / "sl2_coth.json")), "cdybe")
for r in rep.records:
    print(f"{r.status:5s} {r.name:28s} {r.residual_norm}")
print(rep.to_csv().splitlines()[:3])

# Exit code 1 for a model that fails a check.

print(main(["check", "--model", str(models / "sl2_broken_dynamical.json"), "--suite", "dynamical"]))
print(main(["explain", "dynamical.qdybe"]))
