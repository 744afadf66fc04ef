"""Render the phase diagram from the real Clifford sweep table (produced by
the simulation package's CLI) and check the three-region structure."""

import json
import shutil
import subprocess
from pathlib import Path

import pytest

from plotkit.render import render

DATA = Path(__file__).resolve().parents[2] / "data"
TABLE = DATA / "clifford_xzx.csv"


def phase_report(tmp_path):
    if shutil.which("clusterlab") is None:
        pytest.fail("clusterlab CLI not installed; install the simulation "
                    "package to run this integration test")
    if not TABLE.exists():
        pytest.fail("missing %s — run scripts/run_acceptance_sweeps.sh" % TABLE)
    out = tmp_path / "phase.json"
    subprocess.run(["clusterlab", "report", "--table", str(TABLE),
                    "--mode", "phase-diagram", "--out", str(out)], check=True)
    return json.loads(out.read_text())


class TestThreeRegions:
    def test_sequence_spt_volume_trivial(self, tmp_path):
        doc = phase_report(tmp_path)
        labels = [pt["label"] for pt in sorted(doc["points"],
                                               key=lambda p: p["p_s"])]
        core = [l for l in labels if l != "undetermined"]
        assert core, labels
        # collapse runs of equal labels; expect SPT -> volume -> trivial
        runs = [core[0]]
        for label in core[1:]:
            if label != runs[-1]:
                runs.append(label)
        assert runs == ["SPT", "volume", "trivial"], labels

    def test_renders_deterministically(self, tmp_path):
        doc = phase_report(tmp_path)
        src = tmp_path / "phase.json"
        images = []
        for i in (1, 2):
            out = tmp_path / ("fig%d.svg" % i)
            render("phase-diagram", str(src), str(out))
            images.append(out.read_bytes())
        assert images[0] == images[1]
        assert len(doc["points"]) >= 10
