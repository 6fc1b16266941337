#!/usr/bin/env python3
# Copyright 2026 The ttmpp Authors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Solves the exported reference scenarios with HiGHS and compares optima.

Exits 77 (skipped) when highspy is not installed.
"""

import json
import pathlib
import subprocess
import sys
import tempfile

SKIP = 77


def main() -> int:
    ttmpp, checker = sys.argv[1], sys.argv[2]
    try:
        import highspy  # noqa: F401
    except ImportError:
        print("highspy not installed; skipping")
        return SKIP

    with tempfile.TemporaryDirectory() as tmp:
        tmp = pathlib.Path(tmp)
        instance = tmp / "paper.json"
        subprocess.run([ttmpp, "gen-paper-instance", "--seed", "1", "--out",
                        str(instance), "--scenario-dir", str(tmp)], check=True)
        failures = 0
        for name in ("cancel_part_time", "cancel_full_time", "cancel_flagship"):
            scenario = tmp / f"{name}.json"
            lp = tmp / f"{name}.lp"
            subprocess.run([ttmpp, "export-lp", str(instance), "--scenario",
                            str(scenario), "--out", str(lp)], check=True)
            ours = json.loads(subprocess.run(
                [ttmpp, "solve", str(instance), "--scenario", str(scenario),
                 "--report", "json"],
                check=True, capture_output=True, text=True).stdout)
            theirs = json.loads(subprocess.run(
                [sys.executable, checker, str(lp), "--solve"],
                check=True, capture_output=True, text=True).stdout)
            same = (theirs["status"] == "Optimal"
                    and abs(theirs["objective"] - ours["objective"]) < 1e-6)
            print(f"{name}: ttmpp {ours['objective']}, HiGHS "
                  f"{theirs['objective']} ({theirs['status']})"
                  f"{'' if same else '  MISMATCH'}")
            failures += not same
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
