import json
import tempfile
import unittest
from pathlib import Path

from arlbsg.utils.decorators import benchmarked
from arlbsg.utils.properties import lazy_property


class TestBenchmarked(unittest.TestCase):

    def test_writes_time_json(self):
        with tempfile.TemporaryDirectory() as tmp:
            timed = benchmarked(lambda: tmp)
            self.assertEqual(timed(), tmp)
            with (Path(tmp) / 'time.json').open() as f:
                data = json.load(f)
            self.assertGreaterEqual(data['elapsed'], 0)
            self.assertEqual(data['elapsed'], data['finish'] - data['start'])

    def test_passes_through(self):
        self.assertEqual(benchmarked(lambda x: x + 1)(1), 2)


class TestLazyProperty(unittest.TestCase):

    def test_evaluated_once(self):
        calls = []

        class Counter:
            @lazy_property
            def value(self):
                calls.append(1)
                return 42

        counter = Counter()
        self.assertEqual(counter.value, 42)
        self.assertEqual(counter.value, 42)
        self.assertEqual(len(calls), 1)


if __name__ == '__main__':
    unittest.main()
