"""``srta-sim``: run sessions, attacks and the comparison report from the shell.

Exit codes: 0 success, 1 protocol-level failure, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import report as rep
from .adversary import ATTACKS
from .config import ConfigError, ScenarioConfig, load
from .errors import FormatError
from .sim import SessionSpec, World, run_script, transcript_records, write_transcript

EXIT_OK, EXIT_PROTOCOL, EXIT_USAGE = 0, 1, 2


class ArtifactError(Exception):
    pass


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--protocol", choices=("srta", "improved"))
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--delta-t", type=int, dest="delta_t")
    p.add_argument("--config", type=Path)
    p.add_argument("--out", dest="out_dir")
    p.add_argument("--format", choices=("json", "markdown"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="srta-sim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run-session", help="run one honest session and write its transcript")
    _common(p)
    p.add_argument("--reader", type=int, default=0)
    p.add_argument("--tag", type=int, default=0)

    p = sub.add_parser("attack", help="repeat one attack or play one traceability game")
    _common(p)
    p.add_argument("--attack", required=True, choices=ATTACKS)

    p = sub.add_parser("report", help="feature matrix and operation counts for both protocols")
    _common(p)
    p.add_argument("--game-trials", type=int, default=1000)
    p.add_argument("--from", dest="artifacts", type=Path,
                   help="reuse attack-*.json files written by the attack command")
    return parser


def _config(args) -> ScenarioConfig:
    return load(args.config, protocol=args.protocol, trials=args.trials, seed=args.seed,
                delta_t=args.delta_t, out_dir=args.out_dir, format=args.format)


def _out(cfg: ScenarioConfig) -> Path:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _dump(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def cmd_run_session(args, cfg: ScenarioConfig) -> int:
    out = _out(cfg)
    world = World(cfg)
    spec = SessionSpec(args.reader, args.tag)
    if not (0 <= spec.reader < cfg.n_readers and 0 <= spec.tag < cfg.n_tags):
        raise ConfigError("reader/tag index outside the provisioned population")
    [report] = run_script(world, [spec])
    write_transcript(out / "transcript.jsonl", transcript_records(world, [spec]))
    doc = {"format": rep.REPORT_FORMAT, "config": cfg.to_dict(),
           "transcript": "transcript.jsonl", "session": report.to_dict()}
    if cfg.format == "json":
        _dump(out / "session.json", doc)
    else:
        (out / "session.md").write_text(
            f"# Session {report.session} ({cfg.protocol})\n\n- outcome: {report.outcome}\n"
            f"- detail: {report.detail or '-'}\n- transcript entries: {report.entries}\n")
    print(f"{cfg.protocol}: {report.outcome} ({report.entries} transcript entries)")
    return EXIT_OK if report.ok else EXIT_PROTOCOL


def _attack_doc(name: str, cfg: ScenarioConfig, out: Path) -> dict:
    result = rep.run_attack(name, cfg.protocol, cfg.trials, cfg)
    result["format"] = rep.REPORT_FORMAT
    result["config"] = cfg.to_dict()
    if result["kind"] == "attack":
        tdir = out / "transcripts"
        tdir.mkdir(exist_ok=True)
        rows = []
        for i, outcome in enumerate(result.pop("outcomes")):
            fname = f"transcripts/{name}-{cfg.protocol}-{i:04d}.jsonl"
            write_transcript(out / fname, [{"kind": "entry", **e} for e in outcome.transcript])
            rows.append({**outcome.to_dict(), "transcript": fname})
        result["outcomes"] = rows
    return result


def cmd_attack(args, cfg: ScenarioConfig) -> int:
    out = _out(cfg)
    doc = _attack_doc(args.attack, cfg, out)
    _dump(out / f"attack-{args.attack}-{cfg.protocol}.json", doc)
    if doc["kind"] == "game":
        print(f"{args.attack} vs {cfg.protocol}: advantage {doc['advantage']:.4f} "
              f"± {doc['halfwidth']:.4f} over {doc['trials']} games")
    else:
        print(f"{args.attack} vs {cfg.protocol}: success rate {doc['success_rate']:.3f} "
              f"({doc['successes']}/{doc['trials']})")
    return EXIT_OK


def _load_artifacts(folder: Path) -> dict:
    attacks: dict = {}
    for protocol in ("srta", "improved"):
        for name in ATTACKS:
            path = folder / f"attack-{name}-{protocol}.json"
            if not path.exists():
                raise ArtifactError(f"missing artifact {path}")
            doc = json.loads(path.read_text())
            if doc.get("format") != rep.REPORT_FORMAT:
                raise ArtifactError(f"{path}: unsupported format {doc.get('format')}")
            attacks.setdefault(protocol, {})[name] = doc
    return attacks


def cmd_report(args, cfg: ScenarioConfig) -> int:
    attacks = _load_artifacts(args.artifacts) if args.artifacts else None
    doc = rep.build_report(cfg, trials=cfg.trials, game_trials=args.game_trials, attacks=attacks)
    out = _out(cfg)
    _dump(out / "report.json", doc)
    md = rep.to_markdown(doc)
    (out / "report.md").write_text(md)
    print(md if cfg.format == "markdown" else json.dumps(doc["feature_matrix"], indent=2))
    return EXIT_OK


COMMANDS = {"run-session": cmd_run_session, "attack": cmd_attack, "report": cmd_report}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = _config(args)
        return COMMANDS[args.command](args, cfg)
    except (ConfigError, ArtifactError, FormatError) as exc:
        print(f"srta-sim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
