"""
Command-line front end: synth, check, member, normalize and stats

Exit codes: 0 on success, 1 on invalid input or failed verification, 2 when a
resource cap stops a construction.
"""

import argparse
import sys
from typing import List, Optional, Sequence

from pydantic import ValidationError

from .algebra import transition_monoid
from .config import SynthesisOptions
from .errors import CrsError, VerificationError
from .formats import emit_report, load_classes, load_dfa, load_system
from .rewriting import normalize, normalize_trace, quotient_monoid, stats, verify_crs
from .strategies import STRATEGIES
from .utils import format_list, is_verbose, log, set_verbose
from .workflow import SynthesisWorkflow


def _add_cap_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--max-rules", type=int, default=None, help="Largest system any stage may emit")
    parser.add_argument("--max-irr", type=int, default=None, help="Largest irreducible set enumerated")
    parser.add_argument("--workers", type=int, default=None, help="Threads joining critical pairs")
    parser.add_argument("-v", "--verbose", action="store_true", default=None, help="Timestamped progress on stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crsynth",
        description="Synthesize and verify weighted Church-Rosser systems of finite index for regular languages.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    synth = commands.add_parser("synth", help="Build a system recognizing a DFA's language")
    synth.add_argument("--dfa", required=True, help="DFA file")
    synth.add_argument("--alphabet", required=True, help="Alphabet file")
    synth.add_argument("--out", required=True, help="System file to write; .classes and .report go beside it")
    synth.add_argument("--strategy", choices=sorted(STRATEGIES), default=None, help="Construction to use (default: auto)")
    synth.add_argument("--retries", type=int, default=None, help="Marker weight doublings after a failed verification")
    synth.add_argument("--check-length", type=int, default=None, help="Exhaustive DFA cross-check length")
    _add_cap_flags(synth)

    check = commands.add_parser("check", help="Verify a system file")
    check.add_argument("system", help="System file")
    check.add_argument("--dfa", default=None, help="Check rule invariance against this DFA's transition monoid")
    _add_cap_flags(check)

    member = commands.add_parser("member", help="Decide membership through normal forms")
    member.add_argument("system", help="System file")
    member.add_argument("classes", help="Accepting classes file")
    member.add_argument("words", nargs="*", help="Words; tokens separated by spaces, eps for the empty word")
    member.add_argument("-v", "--verbose", action="store_true", default=None)

    normal = commands.add_parser("normalize", help="Print the normal form and the rewrite trace")
    normal.add_argument("system", help="System file")
    normal.add_argument("word", nargs="?", default="", help="Word to normalize")
    normal.add_argument("-v", "--verbose", action="store_true", default=None)

    summary = commands.add_parser("stats", help="Summarize a system file")
    summary.add_argument("system", help="System file")
    summary.add_argument("--max-irr", type=int, default=None, help="Index reported only up to this cap")
    summary.add_argument("-v", "--verbose", action="store_true", default=None)
    return parser


def _options(args: argparse.Namespace) -> SynthesisOptions:
    return SynthesisOptions.from_env(
        strategy=getattr(args, "strategy", None),
        max_rules=getattr(args, "max_rules", None),
        max_irr=getattr(args, "max_irr", None),
        retries=getattr(args, "retries", None),
        check_length=getattr(args, "check_length", None),
        workers=getattr(args, "workers", None),
        verbose=getattr(args, "verbose", None),
    )


def cmd_synth(args: argparse.Namespace, options: SynthesisOptions) -> int:
    workflow = SynthesisWorkflow(args.alphabet, args.dfa, args.out, options)
    summary = workflow.run()
    if not summary['success']:
        stage = f" (stage: {summary['stage']})" if summary['stage'] else ""
        print(f"[error] {summary['error']}{stage}", file=sys.stderr)
        return summary['exit_code']
    sys.stdout.write(emit_report(summary['report']))
    return 0


def cmd_check(args: argparse.Namespace, options: SynthesisOptions) -> int:
    system = load_system(args.system)
    hom = None
    if args.dfa is not None:
        _, hom, _ = transition_monoid(load_dfa(args.dfa, system.alphabet))
    report = verify_crs(system, hom, options.max_irr, options.workers)
    for line in report.to_lines():
        print(line)
    if not report.passed:
        print(f"[error] {report.first_failure()}", file=sys.stderr)
        return 1
    return 0


def cmd_member(args: argparse.Namespace, options: SynthesisOptions) -> int:
    system = load_system(args.system)
    accepted = {word.code for word in load_classes(args.classes, system.alphabet)}
    for word in accepted:
        if not system.is_irreducible_code(word):
            raise VerificationError("classes file lists a reducible word")
    for text in args.words:
        word = system.alphabet.parse(text)
        normal_form, steps = normalize(system, word)
        if steps > word.weight:
            raise VerificationError(f"{steps} rewrite steps on {word} exceed its weight {word.weight}")
        verdict = "accept" if normal_form.code in accepted else "reject"
        print(f"{word} => {normal_form} steps: {steps} {verdict}")
    return 0


def cmd_normalize(args: argparse.Namespace, options: SynthesisOptions) -> int:
    system = load_system(args.system)
    word = system.alphabet.parse(args.word)
    normal_form, trace = normalize_trace(system, word)
    print(f"normal-form: {normal_form}")
    for step, (position, rule_index) in enumerate(trace, start=1):
        print(f"step {step}: position {position} rule {rule_index} ({system.rules[rule_index]})")
    return 0


def cmd_stats(args: argparse.Namespace, options: SynthesisOptions) -> int:
    system = load_system(args.system)
    values = stats(system)
    index = values['index']
    if index is None:
        values['index'] = "infinite"
    elif index > options.max_irr:
        values['index'] = f"over cap {options.max_irr}"
    values['irr-finite'] = "yes" if values['irr-finite'] else "no"
    sys.stdout.write(emit_report(values))
    if is_verbose() and index is not None and index <= options.max_irr:
        irreducibles = quotient_monoid(system, options.max_irr).irreducibles
        log(f"irreducible words: {format_list([str(word) for word in irreducibles])}")
    return 0


COMMANDS = {
    'synth': cmd_synth,
    'check': cmd_check,
    'member': cmd_member,
    'normalize': cmd_normalize,
    'stats': cmd_stats,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        options = _options(args)
    except ValidationError as err:
        print(f"[error] invalid option: {err}", file=sys.stderr)
        return 1
    set_verbose(options.verbose)
    try:
        return COMMANDS[args.command](args, options)
    except CrsError as err:
        print(f"[error] {err}", file=sys.stderr)
        return err.exit_code


def run(argv: Optional[List[str]] = None) -> None:
    sys.exit(main(argv))


if __name__ == "__main__":
    run()
