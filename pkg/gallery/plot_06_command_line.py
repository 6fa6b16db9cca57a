"""
The command line
================

Everything above is also reachable through the ``descryptor`` script.  This
page drives it in process on the circuit files next to it; in a shell, drop
the ``run([...])`` wrapper and type the arguments directly.
"""

# %%
from pathlib import Path

from descryptor.cli import run

here = Path(__file__).resolve().parent if "__file__" in globals() else Path("gallery")
ghz = str(here / "circuits" / "ghz.txt")

# %%
# ``descryptor evolve circuits/ghz.txt``
code, out, err = run(["evolve", ghz])
print(out)

# %%
# ``descryptor analyze circuits/ghz.txt --pair 2 3 --purifier 1``
code, out, err = run(["analyze", ghz, "--pair", "2", "3", "--purifier", "1"])
print(out)

# %%
# A mixed pair without a purifier is refused with exit code 3.
code, out, err = run(["analyze", ghz, "--pair", "1", "2"])
print(code, err)
