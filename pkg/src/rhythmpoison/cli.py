"""Command-line surface.

stdout carries machine-readable JSON only; human logs go to stderr.
Exit codes: 0 success, 1 generic error, 2 trigger overflow, 3 not enough
eligible rows, 64 usage error.  All randomness funnels through --seed.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .audio_io import read_wav, write_wav
from .errors import NotEnoughEligibleError, RhythmPoisonError, TriggerOverflowError
from .poisoning import (
    PoisonPlan,
    load_manifest,
    make_attack_testset,
    poison_dataset,
    save_manifest,
)
from .rhythm import SqueezeParams, StretchParams
from .spectrogram import mel_analyze, mel_invert, read_mel, write_mel
from .trigger import OVERFLOW_EMIT_LONG, OVERFLOW_ERROR, TriggerSpec, apply_trigger
from .vad import detect_active_region

log = logging.getLogger("rhythmpoison")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_OVERFLOW = 2
EXIT_NOT_ENOUGH = 3
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; scripts expect 64
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(payload: dict) -> None:
    print(json.dumps(payload))


def _resolve_threads(value: str, parser) -> int:
    if value == "auto":
        return os.cpu_count() or 1
    try:
        threads = int(value)
    except ValueError:
        parser.error(f"--threads must be an integer or 'auto', got {value!r}")
    if threads < 1:
        parser.error("--threads must be >= 1")
    return threads


def _build_trigger_spec(args, parser) -> TriggerSpec:
    if not 0.0 < args.mu < 1.0:
        parser.error(f"--mu must be in (0, 1), got {args.mu}")
    if args.gl_iters < 1:
        parser.error("--gl-iters must be >= 1")
    policy = OVERFLOW_EMIT_LONG if getattr(args, "allow_overflow", False) else OVERFLOW_ERROR
    if args.mode == "stretch":
        if args.gamma is None:
            parser.error("stretch mode requires --gamma")
        if args.phi is not None or args.w is not None:
            parser.error("--phi/--w do not apply to stretch mode")
        if not 0.0 <= args.gamma <= 1.0:
            parser.error(f"--gamma must be in [0, 1], got {args.gamma}")
        sigma = 1 if args.sigma is None else args.sigma
        if sigma < 1:
            parser.error(f"--sigma must be >= 1, got {sigma}")
        return TriggerSpec(
            mode="stretch",
            stretch=StretchParams(
                gamma_s=args.gamma, sigma_s=sigma, seed=args.seed
            ),
            mu=args.mu,
            gl_iterations=args.gl_iters,
            overflow_policy=policy,
        )
    if args.phi is None:
        parser.error("squeeze mode requires --phi")
    if args.gamma is not None or args.sigma is not None:
        parser.error("--gamma/--sigma do not apply to squeeze mode")
    if args.phi < 2:
        parser.error(f"--phi must be >= 2, got {args.phi}")
    w = 0.6 if args.w is None else args.w
    if not 0.0 <= w <= 1.0:
        parser.error(f"--w must be in [0, 1], got {w}")
    return TriggerSpec(
        mode="squeeze",
        squeeze=SqueezeParams(phi_c=args.phi, w=w),
        mu=args.mu,
        gl_iterations=args.gl_iters,
        overflow_policy=policy,
    )


def _add_global_flags(parser, for_subcommand: bool) -> None:
    # registered on the main parser and again on every subcommand, so the
    # flags work on either side of the command word; the subcommand copies
    # use SUPPRESS defaults to avoid clobbering values parsed earlier
    def default(value):
        return argparse.SUPPRESS if for_subcommand else value

    parser.add_argument("--seed", type=int, default=default(0), help="master seed")
    parser.add_argument("--mu", type=float, default=default(0.85),
                        help="voice-activity threshold coefficient")
    parser.add_argument("--gl-iters", type=int, default=default(60),
                        help="Griffin-Lim iterations for inversion")
    parser.add_argument("--threads", default=default("1"),
                        help="worker count for batch commands, or 'auto'")
    parser.add_argument("--quiet", action="store_true", default=default(False),
                        help="suppress stderr logs")


def _add_trigger_flags(sub, with_overflow=True):
    sub.add_argument("--mode", required=True, choices=["stretch", "squeeze"])
    sub.add_argument("--gamma", type=float, default=None,
                     help="fraction of active frames to duplicate (stretch)")
    sub.add_argument("--sigma", type=int, default=None,
                     help="extra copies per duplicated frame (stretch, default 1)")
    sub.add_argument("--phi", type=int, default=None,
                     help="stride of blended frames (squeeze)")
    sub.add_argument("--w", type=float, default=None,
                     help="blend weight on the following frame (squeeze)")
    if with_overflow:
        sub.add_argument("--allow-overflow", action="store_true",
                         help="emit clips longer than the original instead of failing")


def _add_encoding_flag(sub):
    sub.add_argument("--pcm16", action="store_true",
                     help="write PCM16 instead of float32 WAVs")


def build_parser() -> _Parser:
    parser = _Parser(prog="rhythmpoison", description=__doc__)
    _add_global_flags(parser, for_subcommand=False)
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub = commands.add_parser("trigger", help="poison a single WAV file")
    sub.add_argument("--in", dest="infile", required=True)
    sub.add_argument("--out", dest="outfile", required=True)
    _add_trigger_flags(sub)
    _add_encoding_flag(sub)

    sub = commands.add_parser("poison", help="build a poisoned dataset from a manifest")
    sub.add_argument("--manifest", required=True)
    sub.add_argument("--audio-root", required=True)
    sub.add_argument("--out", required=True)
    sub.add_argument("--target", required=True, help="label poisoned rows receive")
    sub.add_argument("--count", type=int, required=True,
                     help="exact number of training rows to poison")
    sub.add_argument("--force", action="store_true",
                     help="overwrite an existing output manifest")
    sub.add_argument("--include-target-class", action="store_true",
                     help="let rows already labelled with the target be poisoned")
    _add_trigger_flags(sub, with_overflow=False)
    _add_encoding_flag(sub)

    sub = commands.add_parser("attack-testset",
                              help="trigger every non-target test row")
    sub.add_argument("--manifest", required=True)
    sub.add_argument("--audio-root", required=True)
    sub.add_argument("--out", required=True)
    sub.add_argument("--target", required=True)
    sub.add_argument("--force", action="store_true")
    _add_trigger_flags(sub, with_overflow=False)
    _add_encoding_flag(sub)

    sub = commands.add_parser("vad", help="report the active region of a WAV file")
    sub.add_argument("--in", dest="infile", required=True)

    sub = commands.add_parser("mel", help="export a log-mel spectrogram (MEL0)")
    sub.add_argument("--in", dest="infile", required=True)
    sub.add_argument("--out", dest="outfile", required=True)

    sub = commands.add_parser("invert", help="reconstruct audio from a MEL0 file")
    sub.add_argument("--in", dest="infile", required=True)
    sub.add_argument("--out", dest="outfile", required=True)
    _add_encoding_flag(sub)

    sub = commands.add_parser("inspect", help="summarise a manifest")
    sub.add_argument("--manifest", required=True)

    for action in commands.choices.values():
        _add_global_flags(action, for_subcommand=True)
    return parser


def _cmd_trigger(args, parser) -> int:
    spec = _build_trigger_spec(args, parser)
    clip = read_wav(args.infile)
    output, report = apply_trigger(clip, spec)
    write_wav(output, args.outfile, encoding="pcm16" if args.pcm16 else "float32")
    _emit(report.to_dict())
    return EXIT_OK


def _make_plan(args, parser, count: int) -> PoisonPlan:
    spec = _build_trigger_spec(args, parser)
    return PoisonPlan(
        target_label=args.target,
        poison_count=count,
        trigger=spec,
        master_seed=args.seed,
        exclude_target_class=not getattr(args, "include_target_class", False),
    )


def _check_output_dir(out_root: Path, force: bool) -> Path:
    manifest_path = out_root / "manifest.csv"
    if manifest_path.exists() and not force:
        raise RhythmPoisonError(
            f"{manifest_path} exists; pass --force to overwrite"
        )
    out_root.mkdir(parents=True, exist_ok=True)
    return manifest_path


def _cmd_poison(args, parser) -> int:
    if args.count < 0:
        parser.error("--count must be >= 0")
    workers = _resolve_threads(args.threads, parser)
    out_root = Path(args.out)
    manifest_path = _check_output_dir(out_root, args.force)
    entries = load_manifest(args.manifest)
    plan = _make_plan(args, parser, args.count)
    result, report = poison_dataset(
        entries,
        plan,
        audio_root=args.audio_root,
        out_root=out_root,
        workers=workers,
        encoding="pcm16" if args.pcm16 else "float32",
    )
    save_manifest(result, manifest_path)
    report_path = out_root / "poison_report.json"
    report_path.write_text(json.dumps(report.to_dict(), indent=2) + "\n")
    log.info("manifest written to %s", manifest_path)
    _emit(report.to_dict())
    return EXIT_OK


def _cmd_attack_testset(args, parser) -> int:
    workers = _resolve_threads(args.threads, parser)
    out_root = Path(args.out)
    manifest_path = _check_output_dir(out_root, args.force)
    entries = load_manifest(args.manifest)
    plan = _make_plan(args, parser, count=0)
    attack_entries, report = make_attack_testset(
        entries,
        plan,
        audio_root=args.audio_root,
        out_root=out_root,
        workers=workers,
        encoding="pcm16" if args.pcm16 else "float32",
    )
    save_manifest(attack_entries, manifest_path)
    report_path = out_root / "attack_report.json"
    report_path.write_text(json.dumps(report.to_dict(), indent=2) + "\n")
    _emit(report.to_dict())
    return EXIT_OK


def _cmd_vad(args, parser) -> int:
    if not 0.0 < args.mu < 1.0:
        parser.error(f"--mu must be in (0, 1), got {args.mu}")
    clip = read_wav(args.infile)
    result = detect_active_region(mel_analyze(clip), args.mu)
    _emit(result.to_dict())
    return EXIT_OK


def _cmd_mel(args, parser) -> int:
    clip = read_wav(args.infile)
    spec = mel_analyze(clip)
    write_mel(spec, args.outfile)
    _emit(
        {
            "frames": spec.frame_count,
            "mel_bins": spec.mel_bins,
            "sample_rate": spec.config.sample_rate,
            "hop_length": spec.config.hop_length,
            "out": args.outfile,
        }
    )
    return EXIT_OK


def _cmd_invert(args, parser) -> int:
    if args.gl_iters < 1:
        parser.error("--gl-iters must be >= 1")
    spec = read_mel(args.infile)
    clip = mel_invert(spec, iterations=args.gl_iters)
    write_wav(clip, args.outfile, encoding="pcm16" if args.pcm16 else "float32")
    _emit(
        {
            "samples": int(clip.samples.size),
            "sample_rate": clip.sample_rate,
            "out": args.outfile,
        }
    )
    return EXIT_OK


def _cmd_inspect(args, parser) -> int:
    entries = load_manifest(args.manifest)
    by_label: dict[str, int] = {}
    by_split: dict[str, int] = {}
    poisoned_by_split: dict[str, int] = {}
    poisoned = 0
    for e in entries:
        by_label[e.label] = by_label.get(e.label, 0) + 1
        split = e.split or "unsplit"
        by_split[split] = by_split.get(split, 0) + 1
        if e.poisoned:
            poisoned += 1
            poisoned_by_split[split] = poisoned_by_split.get(split, 0) + 1
    _emit(
        {
            "rows": len(entries),
            "poisoned": poisoned,
            "by_label": dict(sorted(by_label.items())),
            "by_split": dict(sorted(by_split.items())),
            "poisoned_by_split": dict(sorted(poisoned_by_split.items())),
        }
    )
    return EXIT_OK


_HANDLERS = {
    "trigger": _cmd_trigger,
    "poison": _cmd_poison,
    "attack-testset": _cmd_attack_testset,
    "vad": _cmd_vad,
    "mel": _cmd_mel,
    "invert": _cmd_invert,
    "inspect": _cmd_inspect,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(levelname)s %(message)s",
    )
    try:
        return _HANDLERS[args.command](args, parser)
    except SystemExit as exc:  # parser.error inside a handler
        return int(exc.code or 0)
    except TriggerOverflowError as exc:
        log.error("%s", exc)
        return EXIT_OVERFLOW
    except NotEnoughEligibleError as exc:
        log.error("%s", exc)
        return EXIT_NOT_ENOUGH
    except (RhythmPoisonError, OSError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
