import pytest

from qsd import verify


def test_all_suites_pass():
    results = verify.run_suite("all")
    failed = [r.check_id for r in results if not r.passed]
    assert not failed, f"failing checks: {failed}"
    # every suite contributed at least one check
    prefixes = {r.check_id.split(".")[0] for r in results}
    assert prefixes == set(verify.SUITE_NAMES)


def test_report_line_format():
    line = verify.CheckResult("demo.check", True, 1.5e-11).line()
    assert line == "PASS  demo.check  1.500e-11"
    line = verify.CheckResult("demo.check", False, 2.0).line()
    assert line.startswith("FAIL  demo.check")


def test_unknown_suite():
    with pytest.raises(ValueError):
        verify.run_suite("appendix_z")
