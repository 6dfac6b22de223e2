from typing import List, Optional
import sys

from wasabi import msg

from ..verify import SUITES, run_suites
from ._util import Arg, Opt, app, fail, set_verbose


@app.command("verify")
def verify_cli(
    # fmt: off
    names: Optional[List[str]] = Arg(None, help="Suites to run, all fast suites if omitted"),
    slow: bool = Opt(False, "--slow", "-S", help="Also run the slow direction-of-effect suites"),
    run_pytest: bool = Opt(False, "--pytest", help="Also run the package's fast test suite"),
    verbose: bool = Opt(False, "--verbose", "-V", help="Log debug information"),
    # fmt: on
):
    """
    Check the library's properties on seeded random instances: criterion
    equivalences, trail sufficiency, beam search against the exhaustive
    oracle, path-count bounds, annulus graph connectivity and degree,
    collision checking and the simulator's invariants. Exits with 1 if any
    suite failed.
    """
    set_verbose(verbose)
    if names:
        unknown = [name for name in names if name not in SUITES]
        if unknown:
            fail(f"Unknown suite(s) {unknown}. Available: {list(SUITES)}")
    n_failed = verify(names or None, slow=slow)
    if run_pytest:
        n_failed += run_package_tests()
    if n_failed:
        sys.exit(1)


def verify(names: Optional[List[str]] = None, *, slow: bool = False) -> int:
    results = run_suites(names, slow=slow)
    msg.divider("Property suites")
    data = [
        (r.name, "yes" if r.passed else "NO", f"{r.seconds:.1f}s", r.detail)
        for r in results
    ]
    msg.table(data, header=("Suite", "Passed", "Time", "Detail"), divider=True)
    n_failed = sum(not r.passed for r in results)
    if n_failed:
        msg.fail(f"{n_failed} of {len(results)} suite(s) failed")
    else:
        msg.good(f"All {len(results)} suite(s) passed")
    return n_failed


def run_package_tests() -> int:
    try:
        import pytest
    except ImportError:
        fail("Running the test suite requires pytest")
    msg.divider("Tests")
    return int(pytest.main(["--pyargs", "beamplan", "-m", "not slow"]) != 0)
