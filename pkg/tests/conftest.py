import json
import os

import pytest
from hypothesis import settings

GOLDEN_DIR = os.path.join(os.path.dirname(__file__), 'goldens')

settings.register_profile('default', deadline=None, max_examples=50)
settings.load_profile('default')


def load_golden(name):
    with open(os.path.join(GOLDEN_DIR, name + '.json'), encoding='utf-8') as fh:
        return json.load(fh)['data']


@pytest.fixture(scope='session')
def golden():
    return load_golden


_ACCEPTANCE = []


@pytest.fixture
def acceptance():
    """Record ``(number, ok, detail)`` for the acceptance summary; prints the line too."""
    def record(number, ok, detail):
        line = '%s criterion %2d: %s' % ('PASS' if ok else 'FAIL', number, detail)
        _ACCEPTANCE.append((number, line))
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section('acceptance criteria')
        for _, line in sorted(_ACCEPTANCE):
            terminalreporter.write_line(line)
