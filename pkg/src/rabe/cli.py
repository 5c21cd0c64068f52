"""Command-line front end.

One subcommand per scheme algorithm, operating on envelope files around a
single trusted-center state file, plus two demonstrations: attack-demo
plays the backdating adversary against the challenger, lemma-check
enumerates which epoch pairs make a ciphertext rewindable.

Exit codes: 0 success, 1 decrypt verdict MISMATCH, 2 refusal outcomes
(revoked key, backwards update), 3 validation errors, 4 I/O problems.
A seed can come from --seed or the RABE_SEED environment variable;
unseeded runs draw from the operating system.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import game, serial
from .errors import RabeError
from .groups import BACKENDS, SIDE_TARGET, TRANSPARENT, new_context
from .policy import parse_policy
from .rng import SeededRng, SystemRng
from .scheme import decrypt, derive_dk, encrypt, keygen, revoke, setup, update_ct, update_key
from .timecode import backdatable_epochs, bit_width, ct_epoch_bits, epoch_bits, zero_positions

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_REFUSED = 2
EXIT_INVALID = 3
EXIT_IO = 4


def _resolve_seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("RABE_SEED")
    return int(env) if env else None


def _rng_for(seed):
    return SystemRng() if seed is None else SeededRng(seed)


def _load_state(path):
    env = serial.read_envelope(path, expect_kind="state")
    pp, mk, tree, rl, counter = serial.state_from_payload(env["payload"])
    return env["params_hash"], pp, mk, tree, rl, counter


def _save_state(path, pp, mk, tree, rl, counter):
    payload = serial.state_payload(pp, mk, tree, rl, counter)
    phash = serial.params_hash(payload["pp"])
    serial.write_envelope(path, serial.envelope("state", pp.ctx.backend, phash, payload))
    return phash


def _write_artifact(path, kind, pp, phash, payload):
    serial.write_envelope(path, serial.envelope(kind, pp.ctx.backend, phash, payload))
    print(f"wrote {kind} to {path}")


def _read_artifact(path, kind, phash):
    env = serial.read_envelope(path, expect_kind=kind)
    serial.check_params_hash(env, phash, path)
    return env["payload"]


def _parse_attrs(text):
    try:
        attrs = {int(part) for part in text.split(",") if part.strip()}
    except ValueError:
        raise RabeError(f"attribute list {text!r} is not comma-separated integers") from None
    if not attrs:
        raise RabeError("empty attribute list")
    return attrs


# ---------------------------------------------------------------------------
# scheme subcommands


def cmd_setup(args):
    seed = _resolve_seed(args)
    ctx = new_context(args.backend, seed=seed or 0)
    pp, mk, tree, rl = setup(ctx, args.users, args.max_time, args.attr_bound, _rng_for(seed))
    phash = _save_state(args.state, pp, mk, tree, rl, 0)
    print(
        f"new {args.backend} deployment in {args.state}: parameter set {phash[:12]}, "
        f"tree capacity {tree.capacity}, epochs 1..{pp.max_time - 1}, "
        f"attributes 1..{pp.attr_max}"
    )
    return EXIT_OK


def cmd_keygen(args):
    phash, pp, mk, tree, rl, counter = _load_state(args.state)
    policy = parse_policy(args.policy)
    sk = keygen(pp, mk, tree, args.id, policy, _rng_for(_resolve_seed(args)))
    _save_state(args.state, pp, mk, tree, rl, counter)
    print(f"key for {args.id!r} at leaf {tree.leaf_for(args.id)}, policy {policy.formula!r}")
    _write_artifact(args.out, "sk", pp, phash, serial.sk_payload(sk))
    return EXIT_OK


def cmd_update_key(args):
    phash, pp, mk, tree, rl, counter = _load_state(args.state)
    ku = update_key(pp, mk, tree, rl, args.epoch, _rng_for(_resolve_seed(args)))
    _save_state(args.state, pp, mk, tree, rl, max(counter, args.epoch))
    print(f"key update for epoch {args.epoch}: {len(ku.parts)} cover node(s)")
    _write_artifact(args.out, "ku", pp, phash, serial.ku_payload(ku))
    return EXIT_OK


def cmd_revoke(args):
    phash, pp, mk, tree, rl, counter = _load_state(args.state)
    revoke(tree, rl, args.id, args.epoch, pp.max_time)
    _save_state(args.state, pp, mk, tree, rl, counter)
    print(f"revoked {args.id!r} from epoch {rl.epochs[args.id]} onward")
    return EXIT_OK


def cmd_encrypt(args):
    phash, pp, mk, tree, rl, counter = _load_state(args.state)
    attrs = _parse_attrs(args.attrs)
    rng = _rng_for(_resolve_seed(args))
    if args.message:
        message = serial.msg_from_payload(pp.ctx, _read_artifact(args.message, "msg", phash))
    else:
        message = pp.ctx.random_element(SIDE_TARGET, rng)
        _write_artifact(args.random_message, "msg", pp, phash, serial.msg_payload(message))
    ct = encrypt(pp, attrs, args.epoch, message, rng)
    print(
        f"encrypted for attributes {sorted(attrs)} at epoch {args.epoch}; "
        f"update slots {sorted(ct.e2)}"
    )
    _write_artifact(args.out, "ct-original", pp, phash, serial.ct_original_payload(ct))
    return EXIT_OK


def cmd_update_ct(args):
    phash, pp, mk, tree, rl, counter = _load_state(args.state)
    ct = serial.ct_original_from_payload(pp.ctx, _read_artifact(args.ct, "ct-original", phash))
    updated = update_ct(pp, ct, args.epoch, _rng_for(_resolve_seed(args)))
    if updated is None:
        print(f"refused: epoch {args.epoch} lies before the ciphertext's epoch {ct.epoch}")
        return EXIT_REFUSED
    print(f"ciphertext moved from epoch {ct.epoch} to {updated.epoch}")
    _write_artifact(args.out, "ct-updated", pp, phash, serial.ct_updated_payload(updated))
    return EXIT_OK


def cmd_derive_dk(args):
    phash, pp, mk, tree, rl, counter = _load_state(args.state)
    sk = serial.sk_from_payload(pp.ctx, _read_artifact(args.sk, "sk", phash))
    ku = serial.ku_from_payload(pp.ctx, _read_artifact(args.ku, "ku", phash))
    dk = derive_dk(sk, ku)
    if dk is None:
        print(f"no decryption key: {sk.identity!r} is revoked at epoch {ku.epoch}")
        return EXIT_REFUSED
    print(f"decryption key for {sk.identity!r} at epoch {ku.epoch} (tree node {dk.node})")
    _write_artifact(args.out, "dk", pp, phash, serial.dk_payload(dk))
    return EXIT_OK


def cmd_decrypt(args):
    phash, pp, mk, tree, rl, counter = _load_state(args.state)
    env = serial.read_envelope(args.ct)
    if env["kind"] == "ct-original":
        print("this ciphertext was never anchored to an epoch; run update-ct first")
        return EXIT_INVALID
    if env["kind"] != "ct-updated":
        print(f"{args.ct}: expected a ct-updated envelope, found {env['kind']!r}")
        return EXIT_INVALID
    serial.check_params_hash(env, phash, args.ct)
    ct = serial.ct_updated_from_payload(pp.ctx, env["payload"])
    dk = serial.dk_from_payload(pp.ctx, _read_artifact(args.dk, "dk", phash))
    if dk.epoch != ct.epoch:
        raise RabeError(
            f"key epoch {dk.epoch} does not match ciphertext epoch {ct.epoch}; "
            "decrypting would yield noise"
        )
    message = decrypt(pp, ct, dk)
    print(f"recovered: {serial.msg_payload(message)['value']}")
    if args.out:
        _write_artifact(args.out, "msg", pp, phash, serial.msg_payload(message))
    if args.expect:
        expected = serial.msg_from_payload(pp.ctx, _read_artifact(args.expect, "msg", phash))
        if message == expected:
            print("verdict: MATCH")
        else:
            print("verdict: MISMATCH")
            return EXIT_MISMATCH
    return EXIT_OK


# ---------------------------------------------------------------------------
# attack-demo


def _suggest_pairs(max_time, limit=5):
    pairs = []
    for t_star in range(2, max_time):
        for t in backdatable_epochs(t_star, max_time)[::-1]:
            pairs.append((t, t_star))
            break
        if len(pairs) >= limit:
            break
    return pairs


def cmd_attack_demo(args):
    seed = _resolve_seed(args)
    if seed is None:
        seed = int.from_bytes(os.urandom(4), "big")
        print(f"seed: {seed} (drawn from the system; pass --seed to reproduce)")
    if args.state:
        _, pp, mk, tree, rl, counter = _load_state(args.state)
        ctx = pp.ctx
        n_users, max_time, attr_max = pp.n_users, pp.max_time, pp.attr_max
    else:
        ctx = new_context(args.backend, seed=seed)
        n_users, max_time, attr_max = args.users, args.max_time, args.attr_bound

    t_star = args.t_star
    if t_star is None:
        t_star = 7 if max_time >= 16 else max(2, max_time // 2 - 1)
    candidates = backdatable_epochs(t_star, max_time)
    t = args.t if args.t is not None else (candidates[-1] if candidates else None)
    if t is None or t not in candidates:
        print(f"pair (t={t}, t*={t_star}) is not vulnerable at epoch range {max_time}.")
        if candidates:
            print(f"backdatable epochs from {t_star}: {candidates}")
        suggestions = _suggest_pairs(max_time)
        if suggestions:
            print("vulnerable (t, t*) pairs to try: " + ", ".join(map(str, suggestions)))
        return EXIT_INVALID

    mode = game.WEAKER if args.weaker_model else game.STANDARD
    print(
        f"backdating attack: {args.trials} trial(s), backend {ctx.backend}, mode {mode}, "
        f"challenge epoch {t_star} rewound to {t}"
    )
    transcripts = game.run_game_trials(
        args.trials,
        ctx=ctx,
        seed=seed,
        mode=mode,
        adversary_cls=lambda rng: game.BackdateAdversary(rng, t_star=t_star, t=t),
        n_users=n_users,
        max_time=max_time,
        attr_max=attr_max,
    )
    _print_narrative(transcripts[0])
    report = game.advantage_report(transcripts, seed=seed)
    print()
    print(game.format_report(report))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"wrote report to {args.out}")
    if args.transcripts:
        os.makedirs(args.transcripts, exist_ok=True)
        for i, tr in enumerate(transcripts):
            path = os.path.join(args.transcripts, f"trial-{i:04d}.json")
            serial.write_envelope(
                path,
                serial.envelope("transcript", tr.backend, tr.params_hash,
                                game.transcript_payload(tr)),
            )
        print(f"wrote {len(transcripts)} transcript envelope(s) to {args.transcripts}/")
    return EXIT_OK


def _print_narrative(tr):
    notes = tr.notes
    print(f"\ntrial 0 ({tr.outcome}):")
    print(f"  1. committed to target attribute set {sorted(tr.challenge_attrs)}")
    if notes.get("harvested"):
        print(
            f"  2. harvested a satisfying private key, holder revoked at epoch {notes['t_star']}"
        )
        print(
            f"  3. public key update at epoch {notes['t']} gave a live decryption key "
            f"(and none at {notes['t_star']}: the revocation held)"
        )
        print(f"  4. rewound the challenge ciphertext, folding update slots {notes['folded_slots']}")
        matched = notes.get("recovered_matches")
        print(
            f"  5. decrypted to challenge message {matched}; hidden bit was {tr.challenge_bit}"
        )
    else:
        print("  2. harvest withheld (weaker model); no credential to combine")
        print(f"  3-5. skipped; guessed {tr.guess} against hidden bit {tr.challenge_bit}")


# ---------------------------------------------------------------------------
# lemma-check


def _pairwise_counts(tau):
    """Literal enumeration of every pair 0 < t < t* < 2^tau."""
    top = 1 << tau
    half = top >> 1
    zeros_exact = [None] * top
    for t in range(1, top):
        zeros_exact[t] = zero_positions(epoch_bits(t, top))
    regime = outside = 0
    samples = []
    for t_star in range(2, top):
        kept = zero_positions(ct_epoch_bits(t_star, top))
        for t in range(1, t_star):
            if zeros_exact[t] <= kept:
                if t_star < half:
                    regime += 1
                else:
                    outside += 1
                    if len(samples) < 5:
                        samples.append((t, t_star))
    return regime, outside, samples


def _regime_pair_count(tau):
    n = (1 << (tau - 1)) - 1
    return n * (n - 1) // 2


def _outside_vulnerable_count(tau):
    """Closed form: t* >= 2^(tau-1) keeps slots only after its all-ones
    prefix, so the vulnerable t are exactly those sharing that prefix."""
    top = 1 << tau
    total = 0
    for t_star in range(top >> 1, top):
        bits = epoch_bits(t_star, top)
        prefix = len(bits) - len(bits.lstrip("1"))
        total += t_star - (top - (1 << (tau - prefix)))
    return total


def _factored_regime_check(tau):
    """Every lower-half epoch keeps all update slots; checking that per
    epoch covers every pair without enumerating the pairs."""
    top = 1 << tau
    full = frozenset(range(1, tau + 1))
    return all(
        zero_positions(ct_epoch_bits(t_star, top)) == full
        for t_star in range(1, top >> 1)
    )


def cmd_lemma_check(args):
    if args.pair:
        try:
            t, t_star = (int(x) for x in args.pair.split(","))
        except ValueError:
            raise RabeError(f"--pair wants 't,t*', got {args.pair!r}") from None
        top = args.max_time
        bit_width(top)
        need = zero_positions(epoch_bits(t, top))
        kept = zero_positions(ct_epoch_bits(t_star, top))
        verdict = "vulnerable" if (need <= kept and t < t_star) else "not vulnerable"
        print(f"epoch range {top}: pair (t={t}, t*={t_star}) is {verdict}")
        print(f"  slots needed by {t}:  {sorted(need)}")
        print(f"  slots kept by {t_star}'s ciphertext encoding: {sorted(kept)}")
        return EXIT_OK

    if not 2 <= args.tau_min <= args.tau_max:
        raise RabeError("need 2 <= tau-min <= tau-max")
    if args.tau_max > 16:
        raise RabeError("enumeration budget ends at tau 16")
    rows = []
    all_ok = True
    for tau in range(args.tau_min, args.tau_max + 1):
        expected_regime = _regime_pair_count(tau)
        expected_outside = _outside_vulnerable_count(tau)
        if tau <= 10:
            regime, outside, samples = _pairwise_counts(tau)
            ok = regime == expected_regime and outside == expected_outside
            method = "pairwise"
        else:
            ok = _factored_regime_check(tau)
            regime, outside, samples = expected_regime, expected_outside, []
            method = "factored"
        all_ok = all_ok and ok
        rows.append(
            {
                "tau": tau,
                "regime_pairs": expected_regime,
                "regime_vulnerable": regime,
                "outside_vulnerable": outside,
                "check": method,
                "ok": ok,
                "outside_samples": samples,
            }
        )

    print("tau  regime pairs  vulnerable  outside vulnerable  check      status")
    for row in rows:
        print(
            f"{row['tau']:>3}  {row['regime_pairs']:>12}  {row['regime_vulnerable']:>10}  "
            f"{row['outside_vulnerable']:>18}  {row['check']:<9}  "
            f"{'ok' if row['ok'] else 'FAIL'}"
        )
        if row["outside_samples"]:
            shown = ", ".join(map(str, row["outside_samples"]))
            print(f"     sample vulnerable pairs outside the lower half: {shown}")
    print(
        "every lower-half pair is vulnerable"
        if all_ok
        else "MISMATCH between enumeration and closed form"
    )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(rows, fh, indent=2)
            fh.write("\n")
        print(f"wrote table to {args.out}")
    return EXIT_OK if all_ok else EXIT_INVALID


# ---------------------------------------------------------------------------
# argument wiring


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="rabe",
        description="Revocable attribute-based encryption with epoch-bound "
        "ciphertexts, and the backdating attack against it.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--seed", type=int, default=None, help="deterministic randomness")
        return p

    p = add("setup", cmd_setup, "create a deployment state file")
    p.add_argument("--state", required=True)
    p.add_argument("--backend", choices=BACKENDS, default=TRANSPARENT)
    p.add_argument("--users", type=int, default=8, help="tree capacity (rounded up to 2^k)")
    p.add_argument("--max-time", type=int, default=32, help="epoch range, a power of two")
    p.add_argument("--attr-bound", type=int, default=4, help="largest attribute value")

    p = add("keygen", cmd_keygen, "issue a private key for an identity and policy")
    p.add_argument("--state", required=True)
    p.add_argument("--id", required=True)
    p.add_argument("--policy", required=True, help='e.g. "1 AND (2 OR 3)"')
    p.add_argument("--out", required=True)

    p = add("update-key", cmd_update_key, "broadcast key update for an epoch")
    p.add_argument("--state", required=True)
    p.add_argument("--epoch", type=int, required=True)
    p.add_argument("--out", required=True)

    p = add("revoke", cmd_revoke, "revoke an identity from an epoch onward")
    p.add_argument("--state", required=True)
    p.add_argument("--id", required=True)
    p.add_argument("--epoch", type=int, required=True)

    p = add("encrypt", cmd_encrypt, "encrypt a message to attributes and an epoch")
    p.add_argument("--state", required=True)
    p.add_argument("--attrs", required=True, help="comma-separated, e.g. 1,2")
    p.add_argument("--epoch", type=int, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--message", help="msg envelope to encrypt")
    group.add_argument(
        "--random-message",
        metavar="PATH",
        help="draw a random message and write its msg envelope here",
    )
    p.add_argument("--out", required=True)

    p = add("update-ct", cmd_update_ct, "move a ciphertext forward in time")
    p.add_argument("--state", required=True)
    p.add_argument("--ct", required=True, help="ct-original envelope")
    p.add_argument("--epoch", type=int, required=True)
    p.add_argument("--out", required=True)

    p = add("derive-dk", cmd_derive_dk, "combine a private key with a key update")
    p.add_argument("--state", required=True)
    p.add_argument("--sk", required=True)
    p.add_argument("--ku", required=True)
    p.add_argument("--out", required=True)

    p = add("decrypt", cmd_decrypt, "decrypt an updated ciphertext")
    p.add_argument("--state", required=True)
    p.add_argument("--ct", required=True, help="ct-updated envelope")
    p.add_argument("--dk", required=True)
    p.add_argument("--expect", help="msg envelope to compare against")
    p.add_argument("--out", help="write the recovered msg envelope")

    p = add("attack-demo", cmd_attack_demo, "run the five-step backdating adversary")
    p.add_argument("--state", help="borrow parameters from a state file")
    p.add_argument("--backend", choices=BACKENDS, default=TRANSPARENT)
    p.add_argument("--users", type=int, default=8)
    p.add_argument("--max-time", type=int, default=32)
    p.add_argument("--attr-bound", type=int, default=4)
    p.add_argument("--t-star", type=int, default=None, help="challenge epoch")
    p.add_argument("--t", type=int, default=None, help="epoch to rewind to")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--weaker-model", action="store_true",
                   help="withhold revoked credentials from the adversary")
    p.add_argument("--out", help="write the report as JSON")
    p.add_argument("--transcripts", metavar="DIR", help="write one transcript envelope per trial")

    p = add("lemma-check", cmd_lemma_check, "enumerate rewindable epoch pairs")
    p.add_argument("--tau-min", type=int, default=2)
    p.add_argument("--tau-max", type=int, default=10)
    p.add_argument("--pair", help="check one 't,t*' pair instead")
    p.add_argument("--max-time", type=int, default=32, help="epoch range for --pair")
    p.add_argument("--out", help="write the table as JSON")

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except RabeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
