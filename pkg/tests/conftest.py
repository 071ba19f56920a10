import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def pytest_terminal_summary(terminalreporter):
  mod = sys.modules.get("test_acceptance")
  results = getattr(mod, "RESULTS", None)
  if not results:
    return
  terminalreporter.section("acceptance criteria")
  for n in sorted(results):
    ok, detail = results[n]
    terminalreporter.write_line("criterion %d: %s  %s" % (n, "PASS" if ok else "FAIL", detail))
