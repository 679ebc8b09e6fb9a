"""Tests for the command-line front end."""
from pathlib import Path
from unittest.mock import patch

import pytest

from app.cli import main
from app.core.config import CommandLineSettings, Settings, get_cli_settings
from app.models.schemas import VerificationReport
from app.services.machine_file import load_machine
from app.services.mealy import transduce_up
from app.services.words import ONES, UPWord


def run(capsys: pytest.CaptureFixture, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestTransduce:
    """Tests for the transduce command."""

    def test_builtin_b4(self, capsys: pytest.CaptureFixture):
        """Test that transduce through builtin B4 prints the image."""
        code, out, _ = run(capsys, "transduce", "--machine", "builtin:b4", "--state", "p", "--word", "(1)")
        assert code == 0
        assert out == "0(1)\n"

    def test_state_alias_and_suffix(self, capsys: pytest.CaptureFixture):
        """Test that the @state suffix and ASCII aliases select the start state."""
        code, out, _ = run(capsys, "transduce", "--machine", "builtin:b4@q", "--word", "0(1)")
        assert (code, out) == (0, "00(1)\n")
        code, out, _ = run(capsys, "transduce", "--machine", "builtin:b4", "--state", "a", "--word", "(1)")
        assert (code, out) == (0, "(1)\n")

    @pytest.mark.parametrize(
        "argv",
        [
            ("transduce", "--machine", "builtin:b4", "--word", "(1)"),               # No start state
            ("transduce", "--machine", "builtin:b4", "--state", "p", "--word", "1"),  # Bad word
            ("transduce", "--machine", "builtin:b4", "--state", "z", "--word", "(1)"),
            ("transduce", "--machine", "missing.machine", "--state", "p", "--word", "(1)"),
        ],
    )
    def test_input_errors_exit_2(self, capsys: pytest.CaptureFixture, argv: tuple):
        """Test that bad input exits 2 with an error on stderr."""
        code, out, err = run(capsys, *argv)
        assert code == 2
        assert out == ""
        assert "error" in err


class TestMachineFiles:
    """Tests for compose and minimize."""

    def test_compose_and_minimize(self, capsys: pytest.CaptureFixture, tmp_path: Path):
        """Test that compose and minimize write machines that still compute ξ."""
        composed = tmp_path / "xi.machine"
        minimal = tmp_path / "xi-min.machine"
        code, out, _ = run(
            capsys,
            "compose",
            "--machines",
            "builtin:b4@p,builtin:b4@a,builtin:b4@q",
            "--out",
            str(composed),
        )
        assert code == 0
        assert out.endswith(f"-> {composed}\n")
        assert transduce_up(load_machine(str(composed)), ONES) == UPWord("00", "1")

        code, out, _ = run(capsys, "minimize", "--machine", str(composed), "--out", str(minimal))
        assert code == 0
        before, after = out.split(" states")[0].split(" -> ")
        assert int(after) <= int(before)
        assert transduce_up(load_machine(str(minimal)), ONES) == UPWord("00", "1")

    @pytest.mark.parametrize("command", ["compose", "minimize"])
    def test_unwritable_output_exits_2(self, capsys: pytest.CaptureFixture, tmp_path: Path, command: str):
        """Test that a target in a missing directory is an input error, not a crash."""
        target = str(tmp_path / "missing" / "out.machine")
        if command == "compose":
            argv = ("compose", "--machines", "builtin:b4@p,builtin:b4@q", "--out", target)
        else:
            argv = ("minimize", "--machine", "builtin:b4@p", "--out", target)
        code, out, err = run(capsys, *argv)
        assert code == 2
        assert out == ""
        assert "Cannot write machine file" in err

    def test_compose_needs_two_machines(self, capsys: pytest.CaptureFixture, tmp_path: Path):
        """Test that compose rejects a single machine."""
        code, _, _ = run(capsys, "compose", "--machines", "builtin:b4@p", "--out", str(tmp_path / "x"))
        assert code == 2


class TestGroupCommands:
    """Tests for order, normalform and enumerate."""

    @pytest.mark.parametrize(
        "element,expected",
        [("pq", "8"), ("pa", "4"), ("p", "2"), ("-", "1")],
    )
    def test_order(self, capsys: pytest.CaptureFixture, element: str, expected: str):
        """Test that order prints the element order."""
        code, out, _ = run(capsys, "order", "--element", element)
        assert (code, out) == (0, f"{expected}\n")

    def test_order_exceeds_cap(self, capsys: pytest.CaptureFixture):
        """Test that order prints EXCEEDS_CAP past the cap."""
        code, out, _ = run(capsys, "order", "--element", "paq", "--cap", "256")
        assert (code, out) == (0, "EXCEEDS_CAP\n")

    def test_bad_element(self, capsys: pytest.CaptureFixture):
        """Test that an unknown generator exits 2 and names the input."""
        code, _, err = run(capsys, "order", "--element", "pxq")
        assert code == 2
        assert "pxq" in err

    @pytest.mark.parametrize("element,expected", [("paq", "pb"), ("ppqq", "IDENTITY"), ("qb", "a")])
    def test_normalform(self, capsys: pytest.CaptureFixture, element: str, expected: str):
        """Test that normalform prints the reduced form."""
        code, out, _ = run(capsys, "normalform", "--element", element)
        assert (code, out) == (0, f"{expected}\n")

    def test_enumerate(self, capsys: pytest.CaptureFixture):
        """Test that enumerate prints length,count rows."""
        code, out, _ = run(capsys, "enumerate", "--max-len", "2")
        assert (code, out) == (0, "0,1\n1,4\n2,9\n")


class TestOrbitAndMetric:
    """Tests for orbit and metric."""

    def test_orbit_csv(self, capsys: pytest.CaptureFixture):
        """Test that orbit --csv prints k,u_k,x_k rows."""
        code, out, _ = run(capsys, "orbit", "--start", "(1)", "--steps", "8", "--prefix", "3", "--csv")
        assert code == 0
        assert out.splitlines()[0] == "1,001,(1)"
        assert out.splitlines()[-1] == "8,111,00(1)"

    def test_orbit_csv_is_deterministic(self, capsys: pytest.CaptureFixture):
        """Test that two identical orbit runs print identical output."""
        argv = ("orbit", "--start", "0(10)", "--steps", "32", "--prefix", "5", "--csv")
        assert run(capsys, *argv) == run(capsys, *argv)

    def test_orbit_plain(self, capsys: pytest.CaptureFixture):
        """Test that the plain orbit format writes the empty prefix as '-'."""
        code, out, _ = run(capsys, "orbit", "--start", "(1)", "--steps", "1")
        assert (code, out) == (0, "k=1 u=- x=00(1)\n")

    @pytest.mark.parametrize(
        "x,y,expected",
        [("(1)", "11110(1)", "2^-4"), ("(1)", "11(1)", "0"), ("(1)", "0(1)", "2^-0")],
    )
    def test_metric(self, capsys: pytest.CaptureFixture, x: str, y: str, expected: str):
        """Test that metric prints the exact distance."""
        code, out, _ = run(capsys, "metric", "--x", x, "--y", y)
        assert (code, out) == (0, f"{expected}\n")


class TestVerify:
    """Tests for the verify command and exit codes."""

    def test_passing_suite(self, capsys: pytest.CaptureFixture):
        """Test that a passing suite prints CHECK lines and RESULT PASS."""
        code, out, _ = run(capsys, "verify", "--suite", "lemma31", "--max", "4")
        lines = out.splitlines()
        assert code == 0
        assert all(line.startswith("CHECK lemma31[") for line in lines[:-1])
        assert lines[-1].startswith("RESULT PASS")

    def test_lemma56_sweep(self, capsys: pytest.CaptureFixture):
        """Test that the orbit sweep passes at n = 8."""
        code, out, _ = run(capsys, "verify", "--suite", "lemma56", "--max", "8")
        assert code == 0
        assert "CHECK lemma56[n=8].v PASS" in out

    def test_failure_exits_1(self, capsys: pytest.CaptureFixture):
        """Test that a failed check exits 1."""
        failing = VerificationReport(suite="basis")
        failing.add("basis.fake", False, "forced")
        with patch("app.cli.run_suite", return_value=failing):
            code, out, _ = run(capsys, "verify", "--suite", "basis")
        assert code == 1
        assert "CHECK basis.fake FAIL forced" in out
        assert out.splitlines()[-1] == "RESULT FAIL 1 checks, 1 failed"

    @pytest.mark.parametrize(
        "argv",
        [
            ("verify", "--suite", "lemma99"),
            ("verify",),
            ("order", "--element", "pq", "--cap", "many"),
            (),
            ("frobnicate",),
        ],
    )
    def test_usage_errors_exit_2(self, capsys: pytest.CaptureFixture, argv: tuple):
        """Test that argparse usage errors exit 2."""
        code, _, err = run(capsys, *argv)
        assert code == 2
        assert "usage" in err


class TestEnvironment:
    """The command line ignores B4_* variables and .env files."""

    @pytest.fixture
    def overridden(self, monkeypatch: pytest.MonkeyPatch, tmp_path: Path):
        monkeypatch.chdir(tmp_path)
        (tmp_path / ".env").write_text("B4_VERIFY_MAX=1\n", encoding="utf-8")
        monkeypatch.setenv("B4_ORDER_CAP", "7")
        get_cli_settings.cache_clear()
        yield
        get_cli_settings.cache_clear()

    def test_service_settings_see_overrides(self, overridden):
        """Test that the service settings pick up the environment and .env file."""
        settings = Settings()
        assert (settings.order_cap, settings.verify_max) == (7, 1)

    def test_command_line_settings_ignore_overrides(self, overridden):
        """Test that the command-line settings keep the built-in defaults."""
        settings = CommandLineSettings()
        assert (settings.order_cap, settings.verify_max) == (4096, 10)

    def test_order_output_unchanged(self, capsys: pytest.CaptureFixture, overridden):
        """Test that order prints the same value whatever the environment says."""
        code, out, _ = run(capsys, "order", "--element", "pq")
        assert (code, out) == (0, "8\n")
