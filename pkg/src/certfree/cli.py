"""``certfree`` command-line tool.

All state lives in explicit files (see ``certfree.wire`` for the format).
Public points are exchanged as hex strings; ``certfree public`` prints them.

Exit codes::

    0   success / signature valid
    1   unexpected error
    2   usage error
    3   CL partial key failed the binding check
    4   decryption failure (ciphertext rejected)
    5   signature invalid
    6   bad parameters, or params-audit below the threshold
    7   file could not be read or written
    10  malformed input (length, truncation, trailing bytes)
    11  invalid group element or scalar
    12  bad magic   13  bad version   14  wrong file kind
    15  file produced under different system params
    16  entropy source failure
    17  key-exchange ephemeral already used

Errors print one ``code=<name> exit=<n> msg=<text>`` line on stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import authority, schemes, users, wire
from .errors import CertFreeError, FormatError, ValidationError
from .group import get_group

EXIT_DECRYPT_FAIL = 4
EXIT_BAD_SIGNATURE = 5
EXIT_AUDIT_FAIL = 6
EXIT_IO = 7


def _fail(code: str, exit_code: int, msg: str) -> int:
    print(f"code={code} exit={exit_code} msg={msg}", file=sys.stderr)
    return exit_code


def _read(path) -> bytes:
    return Path(path).read_bytes()


def _write(path, data: bytes, secret: bool = False, to_stdout: bool = False):
    if to_stdout:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
        return
    path = Path(path)
    mode = 0o600 if secret else 0o644
    fd = os.open(path, os.O_WRONLY | os.O_CREAT | os.O_TRUNC, mode)
    with os.fdopen(fd, "wb") as fh:
        fh.write(data)
    if secret:
        os.chmod(path, 0o600)


def _params(args) -> authority.SystemParams:
    return wire.load_params(_read(args.params), backend=args.backend)


def _load(args, path, kind, params):
    return wire.deserialize(_read(path), params, expect=kind)


def _mpk(args, params):
    return _load(args, args.mpk, wire.Kind.MPK, params)


def _point_arg(text: str, params):
    if os.path.isfile(text):
        text = Path(text).read_text().strip()
    try:
        raw = bytes.fromhex(text)
    except ValueError:
        raise FormatError("point argument is not hex") from None
    return params.group.decode_point(raw)


def cmd_setup(args):
    profile = args.profile or os.environ.get("CERTFREE_PROFILE", "production")
    group = get_group(profile, backend=args.backend)
    params = authority.SystemParams(group, args.t, args.k, args.n)
    msk, mpk = authority.setup(params, os.urandom)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    _write(out / "params.cfc", wire.dump(params, params))
    _write(out / "mpk.cfc", wire.dump(mpk, params))
    _write(out / "msk.cfc", wire.dump(msk, params), secret=True)
    return 0


def cmd_extract(args):
    params = _params(args)
    msk = _load(args, args.msk, wire.Kind.MSK, params)
    mpk = _mpk(args, params)
    partial = authority.extract(args.id, msk, mpk, os.urandom)
    cred = users.idb_credential(args.id, partial, mpk)
    _write(args.out, wire.dump(cred, params), secret=True, to_stdout=args.stdout)
    return 0


def cmd_user_setup(args):
    params = _params(args)
    secret = users.user_setup(params, os.urandom)
    _write(args.out, wire.dump(secret, params), secret=True, to_stdout=args.stdout)
    return 0


def cmd_part_key(args):
    params = _params(args)
    msk = _load(args, args.msk, wire.Kind.MSK, params)
    mpk = _mpk(args, params)
    U = _point_arg(args.commitment, params)
    partial = authority.part_key_gen(args.id, U, msk, mpk, os.urandom)
    _write(args.out, wire.dump(partial, params), secret=True, to_stdout=args.stdout)
    return 0


def cmd_finalize(args):
    params = _params(args)
    mpk = _mpk(args, params)
    secret = _load(args, args.secret, wire.Kind.USER_SECRET, params)
    partial = _load(args, args.partial, wire.Kind.PARTIAL_KEY, params)
    cred = users.user_key_gen(args.id, secret, partial, mpk)
    _write(args.out, wire.dump(cred, params), secret=True, to_stdout=args.stdout)
    return 0


def cmd_public(args):
    params = _params(args)
    kind, _, _ = wire.parse_header(_read(args.file))
    value = wire.deserialize(_read(args.file), params)
    g = params.group
    if kind is wire.Kind.USER_SECRET:
        print(g.encode_point(value.U).hex())
    elif kind in (wire.Kind.CREDENTIAL, wire.Kind.PARTIAL_KEY):
        print(g.encode_point(value.Q).hex())
    else:
        raise ValidationError(f"{kind.name.lower()} has no public point to show")
    return 0


def cmd_encrypt(args):
    params = _params(args)
    mpk = _mpk(args, params)
    Q = _point_arg(args.to_q, params)
    ct = schemes.encrypt(_read(args.infile), args.to_id, Q, mpk, os.urandom)
    _write(args.out, wire.dump(ct, params), to_stdout=args.stdout)
    return 0


def cmd_decrypt(args):
    params = _params(args)
    cred = _load(args, args.cred, wire.Kind.CREDENTIAL, params)
    ct = wire.read_ciphertext(_read(args.infile), params)
    m = schemes.decrypt(cred, ct)
    if m is None:
        return _fail("decrypt-failed", EXIT_DECRYPT_FAIL, "ciphertext rejected")
    _write(args.out, m, secret=True, to_stdout=args.stdout)
    return 0


def cmd_sign(args):
    params = _params(args)
    cred = _load(args, args.cred, wire.Kind.CREDENTIAL, params)
    sig = schemes.sign(_read(args.infile), cred, os.urandom)
    _write(args.out_sig, wire.dump(sig, params), to_stdout=args.stdout)
    return 0


def cmd_verify(args):
    params = _params(args)
    mpk = _mpk(args, params)
    Q = _point_arg(args.q, params)
    sig = _load(args, args.sig, wire.Kind.SIGNATURE, params)
    if schemes.verify(_read(args.infile), args.id, Q, mpk, sig):
        print("valid")
        return 0
    print("invalid")
    return EXIT_BAD_SIGNATURE


def cmd_kex_init(args):
    params = _params(args)
    cred = _load(args, args.cred, wire.Kind.CREDENTIAL, params)
    eph = schemes.kex_init(params, os.urandom)
    # the ephemeral (z, M) has the same shape as a user secret (alpha, U)
    _write(args.out_eph,
           wire.serialize(wire.Kind.USER_SECRET, users.UserSecret(eph.z, eph.M), params),
           secret=True)
    _write(args.out_msg, wire.dump(schemes.kex_message(cred, eph), params))
    return 0


def cmd_kex_finalize(args):
    params = _params(args)
    mpk = _mpk(args, params)
    cred = _load(args, args.cred, wire.Kind.CREDENTIAL, params)
    stored = _load(args, args.eph, wire.Kind.USER_SECRET, params)
    peer = _load(args, args.peer_msg, wire.Kind.KEXMSG, params)
    eph = schemes.KexEphemeral(stored.alpha, stored.U)
    session = schemes.kex_finalize(cred, eph, args.peer_id, peer, mpk, args.role)
    os.remove(args.eph)
    _write(args.out, session.key, secret=True, to_stdout=args.stdout)
    return 0


def cmd_params_audit(args):
    level = authority.security_level(args.t, args.k, 2.0 ** args.budget_log2)
    print(f"{level:.4f}")
    if level < args.min_bits:
        return _fail("below-threshold", EXIT_AUDIT_FAIL,
                     f"{level:.4f} bits < {args.min_bits}")
    return 0


def cmd_bench(args):
    from . import bench

    backends = bench.resolve_backends(args.backend)
    report = bench.run_bench(args.iters, t=args.t, k=args.k, backends=backends)
    print(bench.format_report(report))
    for warning in report["warnings"]:
        print(f"warning: {warning}", file=sys.stderr)
    if args.json:
        Path(args.json).write_text(json.dumps(report, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="certfree", description=__doc__.splitlines()[0],
                                formatter_class=argparse.RawDescriptionHelpFormatter,
                                epilog="\n".join(__doc__.splitlines()[5:]))
    p.add_argument("--backend", choices=["auto", "ext", "python"], default=None,
                   help="ristretto255 kernels (default: $CERTFREE_BACKEND or auto)")
    sub = p.add_subparsers(dest="command", required=True)

    def files(sp, *names):
        for name in names:
            sp.add_argument(f"--{name}", default=f"{name}.cfc",
                            help=f"{name} file (default: ./{name}.cfc)")

    def stdout_flag(sp):
        sp.add_argument("--stdout", action="store_true",
                        help="write the output to stdout instead of a file")

    sp = sub.add_parser("setup", help="create params, msk and mpk")
    sp.add_argument("--t", type=int, default=authority.DEFAULT_T)
    sp.add_argument("--k", type=int, default=authority.DEFAULT_K)
    sp.add_argument("--n", type=int, default=authority.DEFAULT_N)
    sp.add_argument("--profile", choices=["production", "mock"], default=None,
                    help="group profile (default: $CERTFREE_PROFILE or production)")
    sp.add_argument("--out-dir", default=".")
    sp.set_defaults(func=cmd_setup)

    sp = sub.add_parser("extract", help="issue an identity-based credential")
    sp.add_argument("--id", required=True)
    sp.add_argument("--out", required=True)
    files(sp, "params", "msk", "mpk")
    stdout_flag(sp)
    sp.set_defaults(func=cmd_extract)

    sp = sub.add_parser("user-setup", help="create a certificateless user secret")
    sp.add_argument("--out", required=True)
    files(sp, "params")
    stdout_flag(sp)
    sp.set_defaults(func=cmd_user_setup)

    sp = sub.add_parser("part-key", help="issue a certificateless partial key")
    sp.add_argument("--id", required=True)
    sp.add_argument("--commitment", required=True, help="user's U (hex or file)")
    sp.add_argument("--out", required=True)
    files(sp, "params", "msk", "mpk")
    stdout_flag(sp)
    sp.set_defaults(func=cmd_part_key)

    sp = sub.add_parser("finalize", help="combine user secret and partial key")
    sp.add_argument("--id", required=True)
    sp.add_argument("--secret", required=True)
    sp.add_argument("--partial", required=True)
    sp.add_argument("--out", required=True)
    files(sp, "params", "mpk")
    stdout_flag(sp)
    sp.set_defaults(func=cmd_finalize)

    sp = sub.add_parser("public", help="print the public point of a key file as hex")
    sp.add_argument("file")
    files(sp, "params")
    sp.set_defaults(func=cmd_public)

    sp = sub.add_parser("encrypt")
    sp.add_argument("--to-id", required=True)
    sp.add_argument("--to-q", required=True, help="recipient Q (hex or file)")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--out", required=True)
    files(sp, "params", "mpk")
    stdout_flag(sp)
    sp.set_defaults(func=cmd_encrypt)

    sp = sub.add_parser("decrypt")
    sp.add_argument("--cred", required=True)
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--out", required=True)
    files(sp, "params")
    stdout_flag(sp)
    sp.set_defaults(func=cmd_decrypt)

    sp = sub.add_parser("sign")
    sp.add_argument("--cred", required=True)
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--out-sig", required=True)
    files(sp, "params")
    stdout_flag(sp)
    sp.set_defaults(func=cmd_sign)

    sp = sub.add_parser("verify")
    sp.add_argument("--id", required=True)
    sp.add_argument("--q", required=True, help="signer Q (hex or file)")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--sig", required=True)
    files(sp, "params", "mpk")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("kex-init", help="start a key exchange")
    sp.add_argument("--cred", required=True)
    sp.add_argument("--out-eph", required=True)
    sp.add_argument("--out-msg", required=True)
    files(sp, "params")
    sp.set_defaults(func=cmd_kex_init)

    sp = sub.add_parser("kex-finalize", help="derive the 32-byte session key")
    sp.add_argument("--cred", required=True)
    sp.add_argument("--eph", required=True, help="ephemeral file; deleted after use")
    sp.add_argument("--peer-id", required=True)
    sp.add_argument("--peer-msg", required=True)
    sp.add_argument("--role", choices=["initiator", "responder"], default=None)
    sp.add_argument("--out", required=True)
    files(sp, "params", "mpk")
    stdout_flag(sp)
    sp.set_defaults(func=cmd_kex_finalize)

    sp = sub.add_parser("params-audit", help="security level of (t, k)")
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--budget-log2", type=float, default=0.0,
                    help="log2 of the adversary's H1 query budget (default 0)")
    sp.add_argument("--min-bits", type=float, default=127.0)
    sp.set_defaults(func=cmd_params_audit)

    sp = sub.add_parser("bench", help="timings, op counts and sizes")
    sp.add_argument("--iters", type=int, default=100)
    sp.add_argument("--t", type=int, default=authority.DEFAULT_T)
    sp.add_argument("--k", type=int, default=authority.DEFAULT_K)
    sp.add_argument("--backend", dest="backend", default="auto",
                    choices=["auto", "ext", "python", "both"])
    sp.add_argument("--json", default=None)
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command != "bench" and args.backend == "auto":
        args.backend = None
    try:
        return args.func(args)
    except CertFreeError as exc:
        return _fail(exc.code, exc.exit_code, str(exc))
    except OSError as exc:
        return _fail("io", EXIT_IO, str(exc))


if __name__ == "__main__":
    sys.exit(main())
