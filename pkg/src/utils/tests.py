"""Unit tests base class, plus tests for the shared helpers."""
import logging
from fractions import Fraction
from typing import Any

import factory.random
from django.test import Client
from django.test import SimpleTestCase
from django.test import override_settings

from .errors import MonoForgeError
from .parallel import parallel_map
from .parallel import worker_count
from .parser import dumps
from .parser import loads
from .schema import format_rational
from .schema import parse_rational

API = "/api/v1/json"


class MonoForgeTestCase(SimpleTestCase):
    """The base class used by all monoforge tests."""

    @classmethod
    def setUpClass(cls) -> None:
        """Test setup."""
        super().setUpClass()
        # disable logging
        logging.disable(logging.CRITICAL)
        factory.random.reseed_random("monoforge")
        cls.client = Client()

    @classmethod
    def tearDownClass(cls) -> None:
        """Turn logging back on."""
        logging.disable(logging.NOTSET)
        super().tearDownClass()

    def post_json(self, path: str, data: dict[str, Any], status: int = 200) -> dict[str, Any]:
        """POST a JSON payload to the API, check the status code and return the decoded body."""
        response = self.client.post(f"{API}{path}", dumps(data), content_type="application/json")
        assert response.status_code == status, response.content
        return loads(response.content)  # type: ignore[no-any-return]


class TestRationals(MonoForgeTestCase):
    """Tests for the rational string format."""

    def test_parse_rational(self) -> None:
        """Test integers and fractions, and rejection of everything else."""
        assert parse_rational("3") == 3
        assert parse_rational("-1/4") == Fraction(-1, 4)
        for bad in ["1.5", "1/0", "x", "", "1/-2"]:
            with self.assertRaises(ValueError):
                parse_rational(bad)

    def test_format_rational(self) -> None:
        """Test the canonical output form."""
        assert format_rational(Fraction(2, 4)) == "1/2"
        assert format_rational(Fraction(-6, 3)) == "-2"


class TestParser(MonoForgeTestCase):
    """Tests for the deterministic JSON encoder."""

    def test_dumps_is_sorted_and_terminated(self) -> None:
        """Test that keys come out sorted and the output ends with a newline."""
        out = dumps({"b": 1, "a": [1, 2]})
        assert out.endswith(b"\n")
        assert out.index(b'"a"') < out.index(b'"b"')
        assert loads(out) == {"a": [1, 2], "b": 1}


class TestParallel(MonoForgeTestCase):
    """Tests for the thread pool helper."""

    @override_settings(MONO_FORGE_THREADS=4)
    def test_parallel_map_keeps_order(self) -> None:
        """Test that results come back in input order with several workers."""
        assert worker_count() == 4
        assert worker_count(2) == 2
        assert worker_count(16) == 4
        assert parallel_map(lambda k: k * k, range(50)) == [k * k for k in range(50)]

    @override_settings(MONO_FORGE_THREADS=1)
    def test_single_worker(self) -> None:
        """Test the sequential path."""
        assert worker_count(8) == 1
        assert parallel_map(str, [3, 1, 2]) == ["3", "1", "2"]


class TestErrors(MonoForgeTestCase):
    """Tests for the error base class."""

    def test_error_name_and_details(self) -> None:
        """Test the qualified name and the dict form."""
        e = MonoForgeError("boom", k=1)
        assert e.error_name == "utils.MonoForgeError"
        assert e.as_dict() == {"error": "utils.MonoForgeError", "message": "boom", "details": {"k": 1}}
        assert str(e) == "utils.MonoForgeError: boom"
