"""Command-line front end: compute, verify-theorem, replay and catalog list."""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__, catalog
from .config import settings
from .errors import BogomolovError, TooLarge, Unsupported
from .perm import PermGroup

EXIT_OK = 0
EXIT_INCONCLUSIVE = 2
EXIT_REPLAY = 3
EXIT_PARSE = 64


class ParseFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def _dumps(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------------------
# inputs
# ---------------------------------------------------------------------------


def load_group(name=None, path=None):
    """Group from a catalog name or a JSON file (permutation generators or a catalog name)."""
    try:
        if path is not None:
            data = json.loads(Path(path).read_text())
            if "name" in data and "generators" not in data:
                return catalog.named(data["name"])
            return PermGroup.from_json(data)
        if name is None:
            raise ParseFailure("one of --group or --group-file is required")
        return catalog.named(name)
    except (OSError, ValueError, KeyError, TypeError, Unsupported, BogomolovError) as exc:
        if isinstance(exc, ParseFailure):
            raise
        raise ParseFailure(str(exc)) from exc


def load_descriptor(ref):
    try:
        if os.path.exists(ref):
            return catalog.LieOutDescriptor.from_json(json.loads(Path(ref).read_text()))
        stem = Path(ref).stem
        if stem in catalog.BUILTIN_DESCRIPTORS:
            return catalog.BUILTIN_DESCRIPTORS[stem]
        return catalog.LieOutDescriptor.from_json(json.loads(ref))
    except (OSError, ValueError, KeyError, TypeError, Unsupported) as exc:
        raise ParseFailure(f"cannot read descriptor {ref!r}: {exc}") from exc


# ---------------------------------------------------------------------------
# cache
# ---------------------------------------------------------------------------


class Cache:
    """Content-addressed JSON store laid out as ``<root>/<2 hex>/<hash>.json``."""

    def __init__(self, root, verify=False):
        self.root = Path(root)
        self.verify = verify
        self.hits = 0

    @staticmethod
    def key(group, operation, modulus=None):
        payload = _dumps({"group": group.to_json(), "operation": operation, "modulus": modulus})
        return hashlib.sha256(payload.encode()).hexdigest()

    def path(self, key):
        return self.root / key[:2] / f"{key}.json"

    def get(self, key):
        p = self.path(key)
        if not p.exists():
            return None
        return json.loads(p.read_text())

    def put(self, key, value, manifest_ref=None):
        p = self.path(key)
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(_dumps({"value": value, "manifest": manifest_ref}))

    def should_verify(self):
        # recompute every tenth hit, starting with the first
        self.hits += 1
        return self.verify and (self.hits - 1) % 10 == 0


def _manifest(config, input_hash, timings, outcome):
    return {
        "tool_version": __version__,
        "config": config,
        "input_hash": input_hash,
        "timings": timings,
        "outcome": outcome,
    }


def _write_manifest(directory, manifest):
    directory = Path(directory) / "manifests"
    directory.mkdir(parents=True, exist_ok=True)
    name = hashlib.sha256(_dumps(manifest).encode()).hexdigest()
    (directory / f"{name}.json").write_text(json.dumps(manifest, indent=2, sort_keys=True))
    return name


# ---------------------------------------------------------------------------
# compute
# ---------------------------------------------------------------------------


def compute_report(G, strategy=None):
    """Deterministic report dict for one group, plus phase timings."""
    from .cohomology import schur_multiplier
    from .criteria import b0_report

    timings = {}
    n = G.order()
    if strategy is None:
        strategy = "direct" if n <= settings.max_direct_order else "auto"
    t0 = time.perf_counter()
    schur = None
    if n <= settings.max_direct_order:
        schur = list(schur_multiplier(G).invariant_factors)
    timings["schur"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    b0, cert = b0_report(G, strategy)
    timings["bogomolov"] = time.perf_counter() - t0
    if cert.m_g is None and schur is not None:
        cert.m_g = schur
    report = {
        "order": n,
        "schur_multiplier": schur,
        "bogomolov_multiplier": None if b0 is None else list(b0.invariant_factors),
        "strategy": cert.strategy,
        "certificate": cert.to_json(),
    }
    return report, timings


def cmd_compute(args):
    G = load_group(args.group, args.group_file)
    cache = Cache(args.cache_dir, args.verify_cache) if args.cache_dir else None
    key = Cache.key(G, "compute", args.strategy) if cache else None
    report, timings, from_cache = None, {}, False
    if cache:
        hit = cache.get(key)
        if hit is not None:
            report, from_cache = hit["value"], True
            if cache.should_verify():
                fresh, timings = compute_report(G, args.strategy)
                if _dumps(fresh) != _dumps(report):
                    print(f"cache entry {key} differs from recomputation", file=sys.stderr)
                    return EXIT_REPLAY
    if report is None:
        report, timings = compute_report(G, args.strategy)
    outcome = "ok" if report["bogomolov_multiplier"] is not None else "inconclusive"
    manifest = _manifest(settings.snapshot() | {"threads": args.threads, "strategy": args.strategy},
                         G.content_hash(), timings, outcome)
    ref = None
    for directory in filter(None, (args.out, args.cache_dir)):
        ref = _write_manifest(directory, manifest)
    if cache and not from_cache:
        cache.put(key, report, ref)
    text = json.dumps(report, sort_keys=True)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{G.content_hash()}.json").write_text(text)
    print(text)
    return EXIT_OK if outcome == "ok" else EXIT_INCONCLUSIVE


# ---------------------------------------------------------------------------
# verify-theorem
# ---------------------------------------------------------------------------


def _apply_settings(snapshot):
    for k, v in snapshot.items():
        setattr(settings, k, v)


def _job(scope, ref, snapshot, strategy):
    """Run one verification in a worker; returns a JSON-safe row and certificates."""
    from .criteria import replay_certificate, verify_quasisimple

    _apply_settings(snapshot)
    certs = {}
    try:
        if scope == "out-lemma":
            desc = catalog.descriptor(ref)
            v = catalog.verify_out_lemma(desc)
            label = desc.label
            certs["out"] = v.certificate.to_json()
            detail = {"out_order": v.order, "cases": list(v.cases), "sylow2_quotient": list(v.sylow2_quotient)}
            ok = v.verified
        else:
            G = catalog.named(ref)
            label = ref
            if scope == "quasisimple":
                v = verify_quasisimple(G, strategy)
                certs = {k: c.to_json() for k, c in v.certificates.items()}
                detail = {"order": G.order(), "center_order": v.center_order}
                ok = v.verified
            else:
                v = catalog.verify_almost_simple(G, strategy)
                certs["group"] = v.certificate.to_json()
                detail = {"order": G.order(), "socle_order": v.socle_order}
                if v.multiplier is not None:
                    detail["multiplier"] = list(v.multiplier.group.invariant_factors)
                    detail["multiplier_consistent"] = bool(v.multiplier.consistent)
                ok = v.verified and (v.multiplier is None or v.multiplier.consistent)
        replay_fail = []
        for k, c in certs.items():
            r = replay_certificate(c)
            replay_fail.extend(f"{k}: {f}" for f in r.failures)
        status = "replay-failed" if replay_fail else ("verified" if ok else "inconclusive")
        return {"name": label, "status": status, "detail": detail, "replay_failures": replay_fail}, certs
    except TooLarge as exc:
        return {"name": str(ref if not isinstance(ref, dict) else ref), "status": "inconclusive",
                "detail": {"error": str(exc)}, "replay_failures": []}, {}


def cmd_verify(args):
    if args.scope == "out-lemma":
        if args.all_supported:
            refs = list(catalog.BUILTIN_DESCRIPTORS)
        elif args.descriptor:
            refs = [load_descriptor(d).to_json() for d in args.descriptor]
        else:
            raise ParseFailure("out-lemma needs --descriptor or --all-supported")
    else:
        supported = catalog.QUASISIMPLE_SUPPORTED if args.scope == "quasisimple" else catalog.ALMOST_SIMPLE_SUPPORTED
        if args.all_supported:
            refs = list(supported)
        elif args.group:
            refs = list(args.group)
            for r in refs:
                load_group(r)
        else:
            raise ParseFailure(f"{args.scope} needs --group or --all-supported")
    snapshot = settings.snapshot()
    strategy = args.strategy or "auto"
    jobs = [(args.scope, r, snapshot, strategy) for r in refs]
    if args.threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.threads) as pool:
            results = list(pool.map(_job, *zip(*jobs)))
    else:
        results = [_job(*j) for j in jobs]
    rows = [r for r, _ in results]
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for row, certs in results:
            slug = "".join(ch if ch.isalnum() else "_" for ch in row["name"])
            (out / f"{args.scope}-{slug}.json").write_text(
                json.dumps({"row": row, "certificates": certs}, sort_keys=True))
    width = max(len(r["name"]) for r in rows)
    for r in rows:
        print(f"{r['name']:<{width}}  {r['status']}")
        for f in r["replay_failures"]:
            print(f"  {f}")
    if any(r["status"] == "replay-failed" for r in rows):
        return EXIT_REPLAY
    if any(r["status"] != "verified" for r in rows):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


# ---------------------------------------------------------------------------
# replay and catalog
# ---------------------------------------------------------------------------


def _certificates_in(data):
    if "witnesses" in data or not data:
        return {"certificate": data}
    if "certificate" in data:
        return {"certificate": data["certificate"]}
    if "certificates" in data:
        return dict(data["certificates"])
    raise ParseFailure("file holds no certificate")


def cmd_replay(args):
    from .criteria import replay_certificate

    try:
        data = json.loads(Path(args.certificate).read_text())
    except (OSError, ValueError) as exc:
        raise ParseFailure(str(exc)) from exc
    if not isinstance(data, dict):
        raise ParseFailure("certificate must be a JSON object")
    failed = False
    for name, cert in _certificates_in(data).items():
        try:
            res = replay_certificate(cert)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseFailure(f"malformed certificate {name}: {exc}") from exc
        for f in res.failures:
            print(f"{name}: {f}", file=sys.stderr)
        failed |= not res.ok
        print(f"{name}: {'ok' if res.ok else 'FAILED'} ({res.checked} witnesses)")
    return EXIT_REPLAY if failed else EXIT_OK


def cmd_catalog(args):
    for name, rng in catalog.CATALOG_RANGES.items():
        print(f"{name:<20} {rng}")
    print("descriptors          " + ", ".join(catalog.BUILTIN_DESCRIPTORS))
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser():
    from .criteria import STRATEGIES

    strategies = [s for s in STRATEGIES]
    common = _Parser(add_help=False)
    common.add_argument("--strategy", choices=strategies)
    common.add_argument("--max-direct-order", type=int)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--cache-dir")
    common.add_argument("--out")
    common.add_argument("--verify-cache", action="store_true")

    parser = _Parser(prog="bogomolov", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compute", parents=[common], help="Schur and Bogomolov multipliers of one group")
    p.add_argument("--group")
    p.add_argument("--group-file")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify-theorem", parents=[common], help="batch verification against the catalog")
    p.add_argument("scope", choices=["quasisimple", "almost-simple", "out-lemma"])
    p.add_argument("--group", action="append")
    p.add_argument("--descriptor", action="append")
    p.add_argument("--all-supported", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("replay", help="re-verify a certificate file")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("catalog", help="catalog information")
    p.add_argument("action", choices=["list"])
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "max_direct_order", None) is not None:
        settings.max_direct_order = args.max_direct_order
    try:
        return args.func(args)
    except ParseFailure as exc:
        print(f"bogomolov: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except TooLarge as exc:
        print(f"bogomolov: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
