#!/usr/bin/env python3
"""Fallback solver runner using the highspy module.

Usage: highs_runner.py <model.mps> <model.sol> [time_limit]
Writes the mcfod solution file grammar (docs/formats.md).
"""
import sys

import highspy


def main(argv):
    if len(argv) not in (3, 4):
        sys.stderr.write("usage: highs_runner.py <model.mps> <model.sol> [time_limit]\n")
        return 2
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("threads", 1)
    h.setOptionValue("mip_rel_gap", 0.0)
    h.setOptionValue("mip_feasibility_tolerance", 1e-7)
    if len(argv) == 4 and float(argv[3]) > 0:
        h.setOptionValue("time_limit", float(argv[3]))
    if h.readModel(argv[1]) == highspy.HighsStatus.kError:
        sys.stderr.write("cannot read the MPS file\n")
        return 2
    lp = h.getLp()
    status = highspy.HighsModelStatus.kModelEmpty
    if lp.num_col_ > 0:
        h.run()
        status = h.getModelStatus()
    ms = highspy.HighsModelStatus
    word, values = "ERROR", False
    if status == ms.kModelEmpty:
        word = "OPTIMAL"
    elif status == ms.kOptimal:
        word, values = "OPTIMAL", True
    elif status == ms.kInfeasible:
        word = "INFEASIBLE"
    elif status in (ms.kTimeLimit, ms.kIterationLimit):
        word = "TIMEOUT"
        values = h.getInfo().primal_solution_status == 2
    with open(argv[2], "w") as out:
        out.write("status %s\n" % word)
        if values:
            sol = h.getSolution()
            for name, v in zip(lp.col_names_, sol.col_value):
                out.write("%s %.17g\n" % (name, v))
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
