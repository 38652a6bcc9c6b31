import os
import re
import stat
import subprocess
import sys

import pytest

from certfree.cli import main


class Runner:
    def __init__(self, root, capsys):
        self.root = root
        self.capsys = capsys

    def p(self, name):
        return str(self.root / name)

    def __call__(self, *argv):
        self.capsys.readouterr()
        code = main([str(a) for a in argv])
        out, err = self.capsys.readouterr()
        return code, out, err

    def ok(self, *argv):
        code, out, err = self(*argv)
        assert code == 0, err
        return out

    def keys(self, *argv):
        return [*argv, "--params", self.p("params.cfc"), "--mpk", self.p("mpk.cfc")]


@pytest.fixture
def cli(tmp_path, capsys):
    run = Runner(tmp_path, capsys)
    run.ok("setup", "--out-dir", tmp_path)
    return run


@pytest.fixture
def enrolled(cli):
    p = cli.p
    cli.ok(*cli.keys("extract", "--id", "alice@a.example", "--out", p("alice.cred"),
                     "--msk", p("msk.cfc")))
    cli.ok("user-setup", "--out", p("bob.secret"), "--params", p("params.cfc"))
    U = cli.ok("public", p("bob.secret"), "--params", p("params.cfc")).strip()
    cli.ok(*cli.keys("part-key", "--id", "bob@b.example", "--commitment", U,
                     "--out", p("bob.partial"), "--msk", p("msk.cfc")))
    cli.ok(*cli.keys("finalize", "--id", "bob@b.example", "--secret", p("bob.secret"),
                     "--partial", p("bob.partial"), "--out", p("bob.cred")))
    q = {who: cli.ok("public", p(f"{who}.cred"), "--params", p("params.cfc")).strip()
         for who in ("alice", "bob")}
    return cli, q


def test_setup_files(cli):
    assert os.path.getsize(cli.p("mpk.cfc")) == 14 + 32_768
    assert stat.S_IMODE(os.stat(cli.p("msk.cfc")).st_mode) == 0o600


def test_full_idb_cl_flow(enrolled):
    cli, q = enrolled
    p = cli.p
    (cli.root / "msg.txt").write_bytes(b"meet at noon")
    # IDB sender to CL recipient
    cli.ok(*cli.keys("encrypt", "--to-id", "bob@b.example", "--to-q", q["bob"],
                     "--in", p("msg.txt"), "--out", p("msg.ct")))
    assert os.path.getsize(p("msg.ct")) == 14 + 48 + 12
    cli.ok("decrypt", "--cred", p("bob.cred"), "--in", p("msg.ct"), "--out", p("msg.out"),
           "--params", p("params.cfc"))
    assert (cli.root / "msg.out").read_bytes() == b"meet at noon"
    # CL signer, verified by anyone
    cli.ok("sign", "--cred", p("bob.cred"), "--in", p("msg.txt"), "--out-sig", p("msg.sig"),
           "--params", p("params.cfc"))
    assert os.path.getsize(p("msg.sig")) == 14 + 64
    out = cli.ok(*cli.keys("verify", "--id", "bob@b.example", "--q", q["bob"],
                           "--in", p("msg.txt"), "--sig", p("msg.sig")))
    assert out.strip() == "valid"
    # key exchange across domains
    for who in ("alice", "bob"):
        cli.ok("kex-init", "--cred", p(f"{who}.cred"), "--out-eph", p(f"{who}.eph"),
               "--out-msg", p(f"{who}.kex"), "--params", p("params.cfc"))
    assert os.path.getsize(p("alice.kex")) == 14 + 64
    for me, peer, pid, role in (("alice", "bob", "bob@b.example", "initiator"),
                                ("bob", "alice", "alice@a.example", "responder")):
        cli.ok(*cli.keys("kex-finalize", "--cred", p(f"{me}.cred"), "--eph", p(f"{me}.eph"),
                         "--peer-id", pid, "--peer-msg", p(f"{peer}.kex"),
                         "--role", role, "--out", p(f"{me}.key")))
        assert not os.path.exists(p(f"{me}.eph"))
    key_a = (cli.root / "alice.key").read_bytes()
    assert len(key_a) == 32 and key_a == (cli.root / "bob.key").read_bytes()


def test_binding_reject_exit_3(enrolled):
    cli, _ = enrolled
    p = cli.p
    cli.ok("user-setup", "--out", p("mallory.secret"), "--params", p("params.cfc"))
    code, _, err = cli(*cli.keys("finalize", "--id", "bob@b.example",
                                 "--secret", p("mallory.secret"),
                                 "--partial", p("bob.partial"), "--out", p("x.cred")))
    assert code == 3
    assert re.match(r"code=binding-check-failed exit=3 msg=", err)


def test_decrypt_failure_exit_4(enrolled):
    cli, q = enrolled
    p = cli.p
    (cli.root / "m").write_bytes(b"secret")
    cli.ok(*cli.keys("encrypt", "--to-id", "bob@b.example", "--to-q", q["bob"],
                     "--in", p("m"), "--out", p("m.ct")))
    code, out, err = cli("decrypt", "--cred", p("alice.cred"), "--in", p("m.ct"),
                         "--out", p("m.out"), "--params", p("params.cfc"))
    assert code == 4 and out == "" and "exit=4" in err
    assert not os.path.exists(p("m.out"))


def test_truncated_ciphertext_is_format_error(enrolled):
    cli, q = enrolled
    p = cli.p
    (cli.root / "m").write_bytes(b"secret")
    cli.ok(*cli.keys("encrypt", "--to-id", "bob@b.example", "--to-q", q["bob"],
                     "--in", p("m"), "--out", p("m.ct")))
    data = (cli.root / "m.ct").read_bytes()
    (cli.root / "short.ct").write_bytes(data[:14 + 40])
    code, _, err = cli("decrypt", "--cred", p("bob.cred"), "--in", p("short.ct"),
                       "--out", p("m.out"), "--params", p("params.cfc"))
    assert code == 10 and "code=format" in err


def test_bad_signature_exit_5(enrolled):
    cli, q = enrolled
    p = cli.p
    (cli.root / "m").write_bytes(b"original")
    (cli.root / "m2").write_bytes(b"origina1")
    cli.ok("sign", "--cred", p("alice.cred"), "--in", p("m"), "--out-sig", p("m.sig"),
           "--params", p("params.cfc"))
    code, out, _ = cli(*cli.keys("verify", "--id", "alice@a.example", "--q", q["alice"],
                                 "--in", p("m2"), "--sig", p("m.sig")))
    assert code == 5 and out.strip() == "invalid"


def test_invalid_point_argument(enrolled):
    cli, _ = enrolled
    p = cli.p
    (cli.root / "m").write_bytes(b"x")
    code, _, err = cli(*cli.keys("encrypt", "--to-id", "bob", "--to-q", "01" * 32,
                                 "--in", p("m"), "--out", p("m.ct")))
    assert code == 11 and "code=invalid-element" in err
    code, _, _ = cli(*cli.keys("encrypt", "--to-id", "bob", "--to-q", "zz",
                               "--in", p("m"), "--out", p("m.ct")))
    assert code == 10


def test_wrong_kind_and_missing_file(enrolled):
    cli, _ = enrolled
    p = cli.p
    code, _, _ = cli("sign", "--cred", p("mpk.cfc"), "--in", p("params.cfc"),
                     "--out-sig", p("s"), "--params", p("params.cfc"))
    assert code == 14
    code, _, err = cli("sign", "--cred", p("nope.cred"), "--in", p("params.cfc"),
                       "--out-sig", p("s"), "--params", p("params.cfc"))
    assert code == 7 and "code=io" in err


def test_params_mismatch(enrolled, tmp_path):
    cli, _ = enrolled
    other = tmp_path / "other"
    cli.ok("setup", "--out-dir", other, "--t", 2048)
    code, _, err = cli("sign", "--cred", cli.p("alice.cred"), "--in", cli.p("params.cfc"),
                       "--out-sig", cli.p("s"), "--params", other / "params.cfc")
    assert code == 15 and "code=params-mismatch" in err


def test_secret_outputs_restricted(enrolled):
    cli, _ = enrolled
    for name in ("alice.cred", "bob.secret", "bob.partial", "bob.cred"):
        assert stat.S_IMODE(os.stat(cli.p(name)).st_mode) == 0o600


def test_stdout_only_on_request(enrolled):
    cli, _ = enrolled
    p = cli.p
    code, out, _ = cli("user-setup", "--out", p("x.secret"), "--params", p("params.cfc"))
    assert code == 0 and out == ""


def test_params_audit(capsys):
    assert main(["params-audit", "--t", "1024", "--k", "18"]) == 0
    level = float(capsys.readouterr().out)
    assert level >= 127.0
    assert main(["params-audit", "--t", "256", "--k", "8"]) == 6
    assert "code=below-threshold exit=6" in capsys.readouterr().err
    assert main(["params-audit", "--t", "1000", "--k", "8"]) == 6


def test_setup_rejects_weak_params(tmp_path, capsys):
    assert main(["setup", "--out-dir", str(tmp_path), "--t", "256", "--k", "8"]) == 6
    assert "code=bad-params" in capsys.readouterr().err


def test_mock_profile_from_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("CERTFREE_PROFILE", "mock")
    assert main(["setup", "--out-dir", str(tmp_path), "--t", "4", "--k", "2"]) == 0
    assert os.path.getsize(tmp_path / "mpk.cfc") == 14 + 4 * 2


def test_console_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "certfree", "params-audit",
                          "--t", "256", "--k", "32"],
                         capture_output=True, text=True, check=True)
    assert float(out.stdout) >= 138
