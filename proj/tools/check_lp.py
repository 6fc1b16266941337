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
"""Reads an LP file with HiGHS and prints its dimensions as JSON.

Exit status 3 means highspy is not installed.
"""

import argparse
import json
import sys


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("lp_file")
    parser.add_argument("--solve", action="store_true",
                        help="also solve the MIP and report the objective")
    parser.add_argument("--time-limit", type=float, default=120.0)
    args = parser.parse_args()

    try:
        import highspy
    except ImportError:
        print("highspy is not installed", file=sys.stderr)
        return 3

    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    if h.readModel(args.lp_file) != highspy.HighsStatus.kOk:
        print(f"HiGHS could not read {args.lp_file}", file=sys.stderr)
        return 1
    lp = h.getLp()
    integrality = list(lp.integrality_)
    out = {
        "columns": lp.num_col_,
        "rows": lp.num_row_,
        "integers": sum(1 for v in integrality
                        if v == highspy.HighsVarType.kInteger),
        "maximize": lp.sense_ == highspy.ObjSense.kMaximize,
    }
    if args.solve:
        h.setOptionValue("time_limit", args.time_limit)
        h.run()
        out["status"] = h.modelStatusToString(h.getModelStatus())
        out["objective"] = h.getInfo().objective_function_value
    print(json.dumps(out))
    return 0


if __name__ == "__main__":
    sys.exit(main())
