"""Pseudo-PMU recording: ingest, estimate, validate, and a mismatched fit.

No field recording ships with the package, so this builds a 40 s, 30 Hz
recording in which a 20 MW load step (0.2 p.u. on 100 MVA) drives the ZOH
model of a known generator. Both channels carry measurement noise. The
recording goes through the same steps a real one would, from CSV to playback.

Fitting the Tustin structure to the same data shows what a wrong structure
does. The numerator term it relies on comes out essentially zero, and the
recovered time constant turns negative. The estimator reports this as
NonPhysical and does not return a parameter set.

Run:  python3 demos/case3_pmu.py [output-dir]
"""

import sys
import tempfile
from pathlib import Path

from arxgen import GeneratorParams
from arxgen.cli import main
from arxgen.pmu_io import synthetic_recording, write_pmu_csv

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp(prefix="arxgen-pmu-"))
out.mkdir(parents=True, exist_ok=True)

truth = GeneratorParams(H=2.5, R=0.05, T=0.5)
write_pmu_csv(synthetic_recording(truth, seed=0), out / "pmu.csv")
print(f"true parameters: H={truth.H} R={truth.R} T={truth.T}; files in {out}\n")

steps = [
    ["ingest", "--pmu", out / "pmu.csv", "--out", out / "event.csv", "--post", "35"],
    ["estimate", "--data", out / "event.csv", "--method", "zoh"],
    ["validate", "--data", out / "event.csv", "--result", out / "event_zoh_omega.result.json"],
    ["estimate", "--data", out / "event.csv", "--method", "tustin"],
]
for argv in steps:
    print("$ arxgen " + " ".join(str(a) for a in argv))
    code = main([str(a) for a in argv])
    print(f"(exit {code})\n")
