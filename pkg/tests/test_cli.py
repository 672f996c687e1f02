from population_election import __version__
from population_election import cli as cli_mod


def _capture(monkeypatch, target):
    captured = {}

    def fake_main(a):
        captured["args"] = a
        return 0

    monkeypatch.setattr(target, fake_main, raising=False)
    return captured


def test_global_debug_propagates(monkeypatch):
    captured = _capture(monkeypatch, "population_election.harness.main_run")

    assert cli_mod.main(["--debug", "run", "--n", "8"]) == 0
    # run args should include --debug even though only global was passed
    assert captured["args"] == ["--debug", "--n", "8"]


def test_commands_dispatch(monkeypatch):
    for command, target in [
        ("sweep", "population_election.harness.main_sweep"),
        ("check", "population_election.harness.main_check"),
        ("soundness-bfs", "population_election.harness.main_soundness"),
        ("space", "population_election.statespace.main"),
    ]:
        captured = _capture(monkeypatch, target)
        assert cli_mod.main([command, "--n", "16"]) == 0
        assert captured["args"] == ["--n", "16"]


def test_space_receives_global_debug(monkeypatch):
    captured = _capture(monkeypatch, "population_election.statespace.main")
    cli_mod.main(["--debug", "space", "--n", "16"])
    assert captured["args"] == ["--debug", "--n", "16"]


def test_help_and_version(capsys):
    assert cli_mod.main([]) == 0
    assert "soundness-bfs" in capsys.readouterr().out
    assert cli_mod.main(["--version"]) == 0
    assert f"v{__version__}" in capsys.readouterr().out


def test_unknown_command(capsys):
    assert cli_mod.main(["migrate"]) == 1
    assert "Unknown command: migrate" in capsys.readouterr().out


def test_exit_status_is_returned(mocker):
    check = mocker.patch("population_election.harness.main_check", return_value=1)
    assert cli_mod.main(["check", "--trials", "1"]) == 1
    check.assert_called_once_with(["--trials", "1"])
