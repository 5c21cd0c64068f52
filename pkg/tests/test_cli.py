import json

import pytest

from rabe.cli import EXIT_INVALID, EXIT_IO, EXIT_MISMATCH, EXIT_OK, EXIT_REFUSED, main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def deployment(tmp_path, capsys):
    """Seeded transparent deployment with one issued key."""
    state = tmp_path / "state.json"
    sk = tmp_path / "alice.sk.json"
    code, out, _ = run(capsys, "setup", "--state", state, "--seed", 9)
    assert code == EXIT_OK and "tree capacity 8" in out
    code, out, _ = run(
        capsys, "keygen", "--state", state, "--id", "alice",
        "--policy", "1 AND (2 OR 3)", "--out", sk, "--seed", 10,
    )
    assert code == EXIT_OK
    return tmp_path, state, sk


def test_full_scenario_end_to_end(deployment, capsys):
    tmp, state, sk = deployment
    ku = tmp / "ku7.json"
    msg = tmp / "msg.json"
    ct = tmp / "ct.json"
    ct2 = tmp / "ct2.json"
    dk = tmp / "dk.json"

    code, out, _ = run(capsys, "update-key", "--state", state, "--epoch", 7, "--out", ku, "--seed", 11)
    assert code == EXIT_OK and "cover node(s)" in out

    code, out, _ = run(
        capsys, "encrypt", "--state", state, "--attrs", "1,2", "--epoch", 7,
        "--random-message", msg, "--out", ct, "--seed", 12,
    )
    assert code == EXIT_OK and "update slots [1, 2, 3, 4, 5]" in out

    code, out, _ = run(capsys, "update-ct", "--state", state, "--ct", ct, "--epoch", 7, "--out", ct2, "--seed", 13)
    assert code == EXIT_OK

    code, out, _ = run(capsys, "derive-dk", "--state", state, "--sk", sk, "--ku", ku, "--out", dk, "--seed", 14)
    assert code == EXIT_OK and "alice" in out

    code, out, _ = run(
        capsys, "decrypt", "--state", state, "--ct", ct2, "--dk", dk, "--expect", msg,
    )
    assert code == EXIT_OK and "verdict: MATCH" in out


def test_decrypt_refuses_unanchored_ciphertext(deployment, capsys):
    tmp, state, sk = deployment
    msg, ct, dk, ku = tmp / "m.json", tmp / "ct.json", tmp / "dk.json", tmp / "ku.json"
    run(capsys, "encrypt", "--state", state, "--attrs", "1,2", "--epoch", 5,
        "--random-message", msg, "--out", ct, "--seed", 3)
    run(capsys, "update-key", "--state", state, "--epoch", 5, "--out", ku, "--seed", 4)
    run(capsys, "derive-dk", "--state", state, "--sk", sk, "--ku", ku, "--out", dk)
    code, out, _ = run(capsys, "decrypt", "--state", state, "--ct", ct, "--dk", dk)
    assert code == EXIT_INVALID
    assert "update-ct first" in out


def test_epoch_mismatch_is_a_validation_error(deployment, capsys):
    tmp, state, sk = deployment
    msg, ct, ct2 = tmp / "m.json", tmp / "ct.json", tmp / "ct2.json"
    ku, dk = tmp / "ku.json", tmp / "dk.json"
    run(capsys, "encrypt", "--state", state, "--attrs", "1,2", "--epoch", 5,
        "--random-message", msg, "--out", ct, "--seed", 3)
    run(capsys, "update-ct", "--state", state, "--ct", ct, "--epoch", 6, "--out", ct2, "--seed", 5)
    run(capsys, "update-key", "--state", state, "--epoch", 5, "--out", ku, "--seed", 4)
    run(capsys, "derive-dk", "--state", state, "--sk", sk, "--ku", ku, "--out", dk)
    code, _, err = run(capsys, "decrypt", "--state", state, "--ct", ct2, "--dk", dk)
    assert code == EXIT_INVALID
    assert "does not match ciphertext epoch" in err


def test_backwards_update_refused(deployment, capsys):
    tmp, state, sk = deployment
    msg, ct = tmp / "m.json", tmp / "ct.json"
    run(capsys, "encrypt", "--state", state, "--attrs", "1", "--epoch", 9,
        "--random-message", msg, "--out", ct, "--seed", 3)
    code, out, _ = run(capsys, "update-ct", "--state", state, "--ct", ct, "--epoch", 4,
                       "--out", tmp / "nope.json", "--seed", 5)
    assert code == EXIT_REFUSED
    assert "refused" in out
    assert not (tmp / "nope.json").exists()


def test_revoked_user_gets_no_decryption_key(deployment, capsys):
    tmp, state, sk = deployment
    ku = tmp / "ku.json"
    code, _, _ = run(capsys, "revoke", "--state", state, "--id", "alice", "--epoch", 6)
    assert code == EXIT_OK
    run(capsys, "update-key", "--state", state, "--epoch", 8, "--out", ku, "--seed", 4)
    code, out, _ = run(capsys, "derive-dk", "--state", state, "--sk", sk, "--ku", ku,
                       "--out", tmp / "dk.json")
    assert code == EXIT_REFUSED
    assert "revoked" in out


def test_decrypt_mismatch_exit_code(deployment, capsys):
    tmp, state, sk = deployment
    ku, dk = tmp / "ku.json", tmp / "dk.json"
    msg_a, ct_a, ct2_a = tmp / "ma.json", tmp / "cta.json", tmp / "ct2a.json"
    msg_b, ct_b = tmp / "mb.json", tmp / "ctb.json"
    run(capsys, "update-key", "--state", state, "--epoch", 7, "--out", ku, "--seed", 4)
    run(capsys, "derive-dk", "--state", state, "--sk", sk, "--ku", ku, "--out", dk)
    run(capsys, "encrypt", "--state", state, "--attrs", "1,2", "--epoch", 7,
        "--random-message", msg_a, "--out", ct_a, "--seed", 5)
    run(capsys, "update-ct", "--state", state, "--ct", ct_a, "--epoch", 7, "--out", ct2_a, "--seed", 6)
    run(capsys, "encrypt", "--state", state, "--attrs", "1,2", "--epoch", 7,
        "--random-message", msg_b, "--out", ct_b, "--seed", 7)
    code, out, _ = run(capsys, "decrypt", "--state", state, "--ct", ct2_a, "--dk", dk,
                       "--expect", msg_b)
    assert code == EXIT_MISMATCH
    assert "verdict: MISMATCH" in out


def test_validation_and_io_exit_codes(tmp_path, capsys):
    state = tmp_path / "state.json"
    code, _, err = run(capsys, "setup", "--state", state, "--max-time", 12, "--seed", 1)
    assert code == EXIT_INVALID and "power of two" in err
    code, _, err = run(capsys, "keygen", "--state", tmp_path / "absent.json",
                       "--id", "x", "--policy", "1", "--out", tmp_path / "o.json")
    assert code == EXIT_IO
    run(capsys, "setup", "--state", state, "--seed", 1)
    code, _, err = run(capsys, "keygen", "--state", state, "--id", "x",
                       "--policy", "1 XOR 2", "--out", tmp_path / "o.json")
    assert code == EXIT_INVALID
    code, _, err = run(capsys, "encrypt", "--state", state, "--attrs", "one,two",
                       "--epoch", 3, "--random-message", tmp_path / "m.json",
                       "--out", tmp_path / "c.json")
    assert code == EXIT_INVALID


def test_artifacts_from_different_deployments_do_not_mix(tmp_path, capsys):
    state_a, state_b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "setup", "--state", state_a, "--seed", 1)
    run(capsys, "setup", "--state", state_b, "--seed", 2)
    sk = tmp_path / "sk.json"
    run(capsys, "keygen", "--state", state_a, "--id", "u", "--policy", "1", "--out", sk)
    ku = tmp_path / "ku.json"
    run(capsys, "update-key", "--state", state_b, "--epoch", 3, "--out", ku, "--seed", 3)
    code, _, err = run(capsys, "derive-dk", "--state", state_b, "--sk", sk, "--ku", ku,
                       "--out", tmp_path / "dk.json")
    assert code == EXIT_INVALID
    assert "parameter" in err.lower()


def test_attack_demo_seeded_run(tmp_path, capsys):
    report_path = tmp_path / "report.json"
    tdir = tmp_path / "transcripts"
    code, out, _ = run(
        capsys, "attack-demo", "--seed", 7, "--trials", 5,
        "--out", report_path, "--transcripts", tdir,
    )
    assert code == EXIT_OK
    assert "challenge epoch 7 rewound to 6" in out
    assert "trial 0 (win):" in out
    assert "advantage         +0.5000" in out
    report = json.loads(report_path.read_text())
    assert report["trials"] == 5 and report["wins"] == 5
    files = sorted(tdir.glob("trial-*.json"))
    assert len(files) == 5
    env = json.loads(files[0].read_text())
    assert env["kind"] == "transcript"
    assert env["payload"]["outcome"] == "win"


def test_attack_demo_is_bit_reproducible(tmp_path, capsys):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    for tdir in (out_a, out_b):
        code, _, _ = run(capsys, "attack-demo", "--seed", 42, "--trials", 3,
                         "--transcripts", tdir)
        assert code == EXIT_OK
    for name in ("trial-0000.json", "trial-0001.json", "trial-0002.json"):
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()


def test_attack_demo_weaker_model(tmp_path, capsys):
    code, out, _ = run(capsys, "attack-demo", "--seed", 3, "--trials", 6, "--weaker-model")
    assert code == EXIT_OK
    assert "mode weaker" in out
    assert "harvest withheld" in out


def test_attack_demo_rejects_dead_pair_with_suggestions(capsys):
    code, out, _ = run(
        capsys, "attack-demo", "--seed", 1, "--max-time", 8, "--t-star", 6, "--t", 5,
    )
    assert code == EXIT_INVALID
    assert "not vulnerable" in out
    assert "pairs to try" in out


def test_attack_demo_on_existing_state(tmp_path, capsys):
    state = tmp_path / "state.json"
    run(capsys, "setup", "--state", state, "--max-time", 16, "--seed", 2)
    code, out, _ = run(capsys, "attack-demo", "--state", state, "--seed", 2, "--trials", 2)
    assert code == EXIT_OK
    assert "challenge epoch 7" in out


def test_lemma_check_single_pair(capsys):
    code, out, _ = run(capsys, "lemma-check", "--pair", "5,7")
    assert code == EXIT_OK
    assert "(t=5, t*=7) is vulnerable" in out
    assert "slots needed by 5:  [1, 2, 4]" in out
    code, out, _ = run(capsys, "lemma-check", "--pair", "5,6", "--max-time", 8)
    assert code == EXIT_OK and "not vulnerable" in out
    code, out, _ = run(capsys, "lemma-check", "--pair", "5,6", "--max-time", 32)
    assert code == EXIT_OK and "is vulnerable" in out


def test_lemma_check_table(tmp_path, capsys):
    table = tmp_path / "table.json"
    code, out, _ = run(capsys, "lemma-check", "--tau-min", 2, "--tau-max", 6, "--out", table)
    assert code == EXIT_OK
    assert "every lower-half pair is vulnerable" in out
    rows = json.loads(table.read_text())
    assert [r["tau"] for r in rows] == [2, 3, 4, 5, 6]
    assert all(r["ok"] for r in rows)
    by_tau = {r["tau"]: r for r in rows}
    assert by_tau[5]["regime_pairs"] == 105
    assert by_tau[5]["outside_vulnerable"] == 35
    code, _, err = run(capsys, "lemma-check", "--tau-max", 20)
    assert code == EXIT_INVALID and "budget" in err


def test_seed_env_variable(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("RABE_SEED", "77")
    state_a, state_b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "setup", "--state", state_a)
    run(capsys, "setup", "--state", state_b)
    assert state_a.read_bytes() == state_b.read_bytes()
    monkeypatch.delenv("RABE_SEED")
    state_c, state_d = tmp_path / "c.json", tmp_path / "d.json"
    run(capsys, "setup", "--state", state_c)
    run(capsys, "setup", "--state", state_d)
    assert state_c.read_bytes() != state_d.read_bytes()
