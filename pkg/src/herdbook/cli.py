"""Command-line interface: evaluation, reporting, data tooling, service.

Table output is aligned plain text; pass --json on eval and report for the
structured form. Every command with randomness takes --seed.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .api.config import load_service_config
from .api.service import create_app
from .errors import HerdbookError
from .evaluation import METHODS, eval_topk, seek_reports, synth_dump
from .ingest.client import load_feed_config
from .ingest.events import parse_event
from .ingest.mock_feed import mock_feed_app
from .match.fusion import FusionConfig
from .match.gallery import index_from_registry
from .match.index import save_index
from .registry.dump import import_dump, load_dump, save_dump
from .registry.store import Registry
from .synth import synth_population

logger = logging.getLogger(__name__)


def _format_table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [
        max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
        for i, h in enumerate(headers)
    ]
    lines = [
        "  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip(),
        "  ".join("-" * w for w in widths),
    ]
    for row in rows:
        lines.append(
            "  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip()
        )
    return "\n".join(lines)


def _parse_ints(text: str) -> tuple[int, ...]:
    return tuple(int(part) for part in text.split(",") if part.strip())


def _parse_methods(text: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in text.split(",") if part.strip())


def cmd_synth(args: argparse.Namespace) -> int:
    pop = synth_population(
        n_individuals=args.individuals,
        sightings_per_individual=args.sightings,
        seed=args.seed,
        jitter=args.jitter,
        flip_rate=args.flip,
        wildcard_rate=args.wildcard_rate,
        contour_points=args.points,
    )
    dump = synth_dump(pop)
    Path(args.out).write_text(json.dumps(dump, indent=1))
    print(
        f"wrote {args.out}: {len(dump['individuals'])} individuals,"
        f" {len(dump['sightings'])} sightings,"
        f" {len(dump['contours'])} contours (seed {args.seed})"
    )
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    dump = load_dump(args.dump)
    fusion = FusionConfig(
        curv_coefficient=args.curv_coefficient, lnbnn_k=args.lnbnn_k
    )
    result = eval_topk(
        dump,
        codes_per_individual=args.codes_per_individual,
        ks=_parse_ints(args.ks),
        methods=_parse_methods(args.methods),
        fusion=fusion,
    )
    if args.json:
        print(json.dumps(result, indent=2))
        return 0
    print(
        f"{result['n_individuals']} gallery individuals,"
        f" {result['n_queries']} held-out queries,"
        f" {result['gallery_descriptors']} gallery descriptors,"
        f" {result['codes_per_individual']} codes per individual"
    )
    headers = ["method"] + [f"top-{k}" for k in result["ks"]]
    rows = [
        [m] + [f"{result['accuracy'][m][k]:.3f}" for k in result["ks"]]
        for m in result["methods"]
    ]
    print(_format_table(headers, rows))
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    dump = load_dump(args.dump)
    result = seek_reports(dump)
    if args.json:
        print(json.dumps(result, indent=2))
        return 0
    print(f"{result['n_codes']} coded sightings")
    rows = [
        [slot, value, str(count), f"{result['histograms'][slot][value]:.3f}"]
        for slot, values in result["counts"].items()
        for value, count in values.items()
    ]
    print(_format_table(["slot", "value", "count", "freq"], rows))
    print()
    if result["agreement"] is None:
        print("agreement: n/a (no individual coded twice)")
    else:
        print(f"agreement over {result['n_agreement_pairs']} code pairs")
        rows = [
            [slot, f"{value:.3f}"]
            for slot, value in result["agreement"].items()
        ]
        print(_format_table(["slot", "agreement"], rows))
    return 0


def cmd_import(args: argparse.Namespace) -> int:
    dump = load_dump(args.dump)
    reg = import_dump(dump, db_path=args.db, photo_root=args.photos)
    problems = reg.check_integrity()
    print(
        f"imported {len(reg.list_individuals())} individuals,"
        f" {len(reg.list_group_sightings())} group sightings into {args.db}"
    )
    if problems:
        for p in problems:
            print(f"integrity: {p}", file=sys.stderr)
        return 1
    return 0


def cmd_export(args: argparse.Namespace) -> int:
    reg = Registry(db_path=args.db, photo_root=args.photos)
    save_dump(reg, args.out)
    print(f"wrote {args.out}")
    return 0


def cmd_reindex(args: argparse.Namespace) -> int:
    reg = Registry(db_path=args.db, photo_root=args.photos)
    idx = index_from_registry(reg)
    if idx is None:
        print("no confirmed individuals with contours; nothing to index")
        return 0
    save_index(idx, args.out)
    reg.mark_index_fresh()
    print(
        f"wrote {args.out}: {idx.size} descriptors,"
        f" {len(idx.individuals())} individuals, generation {idx.generation}"
    )
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    config = load_service_config(args.config)
    host = args.host if args.host is not None else config.host
    port = args.port if args.port is not None else config.port
    uvicorn.run(create_app(config), host=host, port=port, log_level="info")
    return 0


def cmd_mock_feed(args: argparse.Namespace) -> int:
    import uvicorn

    raw = json.loads(Path(args.fixtures).read_text())
    if not isinstance(raw, list):
        raise HerdbookError("fixtures file must hold a JSON array of events")
    for record in raw:
        if isinstance(record, dict) and record.get("external_id"):
            try:
                parse_event(record)
            except HerdbookError as exc:
                logger.warning("serving malformed fixture anyway: %s", exc)
    app = mock_feed_app(raw, require_token=args.token)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def cmd_feed_pull(args: argparse.Namespace) -> int:
    from .ingest.client import fetch_active_events
    from .ingest.client import ingest_events

    config = load_feed_config(args.config)
    reg = Registry(db_path=args.db, photo_root=args.photos)
    events = fetch_active_events(config, since=args.since)
    summary = ingest_events(reg, events)
    print(
        f"fetched {len(events)} events: {summary.created} created,"
        f" {summary.duplicates} duplicates, {summary.invalid} invalid"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="herdbook",
        description="Elephant re-identification toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic registry dump")
    p.add_argument("--out", required=True, help="dump file to write")
    p.add_argument("--individuals", type=int, default=45)
    p.add_argument("--sightings", type=int, default=3, help="per individual")
    p.add_argument("--flip", type=float, default=0.0, help="per-slot code flip probability")
    p.add_argument("--jitter", type=float, default=0.02, help="contour jitter as a fraction of arc length")
    p.add_argument("--wildcard-rate", type=float, default=0.0, help="per-slot wildcard dropout probability")
    p.add_argument("--points", type=int, default=400, help="points per raw contour")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("eval", help="top-k retrieval accuracy from a dump")
    p.add_argument("--dump", required=True)
    p.add_argument("--codes-per-individual", type=int, default=2, choices=(1, 2))
    p.add_argument("--ks", default="1,5,10,15", help="comma-separated rank cutoffs")
    p.add_argument("--methods", default=",".join(METHODS), help="comma-separated subset of seek,curv,hybrid")
    p.add_argument("--curv-coefficient", type=float, default=FusionConfig().curv_coefficient)
    p.add_argument("--lnbnn-k", type=int, default=FusionConfig().lnbnn_k)
    p.add_argument("--seed", type=int, default=0, help="accepted for interface symmetry; evaluation is deterministic")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("report", help="attribute frequency and agreement tables")
    p.add_argument("--dump", required=True)
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("import", help="rebuild a registry database from a dump")
    p.add_argument("--dump", required=True)
    p.add_argument("--db", required=True, help="sqlite file to create")
    p.add_argument("--photos", default=None, help="photo storage directory")
    p.set_defaults(func=cmd_import)

    p = sub.add_parser("export", help="write a registry database to a dump")
    p.add_argument("--db", required=True)
    p.add_argument("--photos", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("reindex", help="rebuild the descriptor index from a registry")
    p.add_argument("--db", required=True)
    p.add_argument("--photos", default=None)
    p.add_argument("--out", required=True, help=".npz index snapshot to write")
    p.set_defaults(func=cmd_reindex)

    p = sub.add_parser("serve", help="run the review service")
    p.add_argument("--config", default=None, help="service config JSON (or HERDBOOK_CONFIG)")
    p.add_argument("--host", default=None)
    p.add_argument("--port", type=int, default=None)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("mock-feed", help="serve event fixtures over the feed wire format")
    p.add_argument("--fixtures", required=True, help="JSON array of event records")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8100)
    p.add_argument("--token", default=None, help="require this bearer token")
    p.set_defaults(func=cmd_mock_feed)

    p = sub.add_parser("feed-pull", help="fetch feed events into a registry")
    p.add_argument("--config", default=None, help="feed config JSON (or HERDBOOK_FEED_CONFIG)")
    p.add_argument("--db", required=True)
    p.add_argument("--photos", default=None)
    p.add_argument("--since", default=None, help="only events after this ISO timestamp")
    p.set_defaults(func=cmd_feed_pull)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (HerdbookError, OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
