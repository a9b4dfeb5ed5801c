# Boundedness suites: for each operator/space pairing, check the hypotheses at
# the configured parameters and tabulate ||T f|| / ||f|| over the test corpus.
# A bounded operator shows ratios that stay put when the grid is refined.
#
# Run: python3 demos/suites.py

from intrinsic_lp import Corpus, SuiteConfig, emit_report, run_suite
from intrinsic_lp.verify import OperatorBank

cfg = SuiteConfig()
coarse = cfg.grid()
for grid in (coarse, coarse.refined()):
    corpus = Corpus.default(grid)
    bank = OperatorBank(grid, cfg.alpha)
    for sid in ("t2.1", "cor-g", "t4.2"):
        suite = run_suite(sid, cfg, corpus, bank=bank)
        print(f"N={grid.shape[0]} {sid}: hypotheses ok={suite.hypotheses_ok}, max ratio {suite.max_ratio:.4f}")

print("report written to", emit_report([suite], "/tmp/ilp_demo"))
