"""
Synthesis workflow - runs every stage of `synth` in sequence

Stages:
1. Load the alphabet and the DFA
2. Build the transition monoid
3. Synthesize and verify a system with the selected strategy
4. Build the quotient and mark the accepting classes
5. Cross-check class membership against the DFA
6. Write the system, classes and report files

Usage:
    workflow = SynthesisWorkflow("parity.alpha", "parity.dfa", "parity.sys")
    summary = workflow.run()

    # in memory, nothing written
    workflow = SynthesisWorkflow(alphabet_text="c 1\n", dfa_text=dfa_source)
"""

import sys
import time
from typing import Any, Callable, Dict, List, Optional

from .algebra import Dfa, MonoidHom, transition_monoid
from .config import SynthesisOptions
from .errors import CrsError, InvalidInputError, ResourceCapError
from .formats import emit_classes, emit_report, emit_system, parse_alphabet, parse_dfa
from .rewriting import QuotientMonoid, SemiThueSystem, quotient_monoid
from .strategies import get_strategy
from .synthesis import RecognizedLanguage, cross_check
from .utils import log, read_text, set_verbose, write_text
from .words import WeightedAlphabet


class SynthesisWorkflow:
    """
    Orchestrates the synthesis pipeline from input files to verified artifacts
    """

    def __init__(
        self,
        alphabet_path: Optional[str] = None,
        dfa_path: Optional[str] = None,
        out_path: Optional[str] = None,
        options: Optional[SynthesisOptions] = None,
        alphabet_text: Optional[str] = None,
        dfa_text: Optional[str] = None,
    ):
        """
        Initialize the workflow

        Args:
            alphabet_path: Alphabet file
            dfa_path: DFA file over that alphabet
            out_path: System file to write; `.classes` and `.report` go beside it.
                Without it the write step is skipped
            options: Strategy, caps and verbosity
            alphabet_text: Alphabet source used instead of alphabet_path
            dfa_text: DFA source used instead of dfa_path
        """
        self.alphabet_path = alphabet_path
        self.dfa_path = dfa_path
        self.out_path = out_path
        self.alphabet_text = alphabet_text
        self.dfa_text = dfa_text
        self.options = options or SynthesisOptions.from_env()
        self.verbose = self.options.verbose
        set_verbose(self.verbose)
        self.start_time: Optional[float] = None

        self.alphabet: Optional[WeightedAlphabet] = None
        self.dfa: Optional[Dfa] = None
        self.hom: Optional[MonoidHom] = None
        self.system: Optional[SemiThueSystem] = None
        self.quotient: Optional[QuotientMonoid] = None
        self.language: Optional[RecognizedLanguage] = None
        self.synthesis_result: Dict[str, Any] = {}

        self.step_results: Dict[str, Dict[str, Any]] = {}
        self.workflow_status = "initialized"
        self.total_steps = 6 if out_path is not None else 5

    def print_step_header(self, step_num: int, title: str):
        if self.verbose:
            print(f"\n{'=' * 60}\n Step {step_num}/{self.total_steps}: {title}\n{'=' * 60}", file=sys.stderr)

    def print_step_result(self, step_name: str, result: Dict[str, Any], duration: float):
        if not self.verbose:
            return
        success = result.get('success', False)
        print(f"{step_name} {'COMPLETED' if success else 'FAILED'} ({duration:.2f}s)", file=sys.stderr)
        if not success:
            print(f"   Error: {result.get('error', 'unknown error')}", file=sys.stderr)

    def _run_step(self, step_num: int, key: str, title: str, action: Callable[[], Dict[str, Any]]) -> Dict[str, Any]:
        self.print_step_header(step_num, title)
        step_start = time.time()
        try:
            result = action()
        except ResourceCapError as e:
            result = {'success': False, 'error': str(e), 'stage': e.stage, 'exit_code': e.exit_code}
        except CrsError as e:
            result = {'success': False, 'error': str(e), 'exit_code': e.exit_code}
        duration = time.time() - step_start
        self.step_results[key] = {'result': result, 'duration': duration, 'success': result.get('success', False)}
        self.print_step_result(title, result, duration)
        return result

    @staticmethod
    def _source(text: Optional[str], path: Optional[str], what: str) -> str:
        if text is not None:
            return text
        if path is None:
            raise InvalidInputError(f"no {what} given")
        return read_text(path)

    def _load_inputs(self) -> Dict[str, Any]:
        self.alphabet = parse_alphabet(self._source(self.alphabet_text, self.alphabet_path, "alphabet"))
        self.dfa = parse_dfa(self._source(self.dfa_text, self.dfa_path, "DFA"), self.alphabet)
        log(f"alphabet of {len(self.alphabet)} letters, DFA with {len(self.dfa.states)} states")
        return {'success': True, 'letters': len(self.alphabet), 'states': len(self.dfa.states)}

    def _build_monoid(self) -> Dict[str, Any]:
        monoid, self.hom, _ = transition_monoid(self.dfa)
        log(f"transition monoid has {monoid.size} elements")
        return {'success': True, 'monoid_size': monoid.size}

    def _synthesize(self) -> Dict[str, Any]:
        strategy = get_strategy(self.options.strategy, self.options)
        self.synthesis_result = strategy.synthesize(self.hom)
        if self.synthesis_result['success']:
            self.system = self.synthesis_result['system']
        return self.synthesis_result

    def _build_quotient(self) -> Dict[str, Any]:
        self.quotient = quotient_monoid(self.system, self.options.max_irr)
        accepting = frozenset(
            i for i, word in enumerate(self.quotient.irreducibles) if self.dfa.accepts_code(word.code)
        )
        self.language = RecognizedLanguage(self.system, self.quotient, accepting, self.dfa)
        return {'success': True, 'index': self.quotient.index, 'accepting': len(accepting)}

    def _cross_check(self) -> Dict[str, Any]:
        checked = cross_check(self.language, self.options.check_length)
        return {'success': True, 'checked': checked}

    def _write_artifacts(self) -> Dict[str, Any]:
        write_text(self.out_path, emit_system(self.system))
        write_text(self.out_path + ".classes", emit_classes(self.language.accepting_words))
        write_text(self.out_path + ".report", emit_report(self.report_values()))
        return {'success': True, 'files': [self.out_path, self.out_path + ".classes", self.out_path + ".report"]}

    def report_values(self) -> Dict[str, Any]:
        report = self.synthesis_result.get('report')
        values: Dict[str, Any] = {
            'strategy': self.options.strategy,
            'path': ", ".join(self.synthesis_result.get('path', [])),
            'rules': len(self.system) if self.system is not None else 0,
            'index': self.quotient.index if self.quotient is not None else 'unknown',
        }
        if report is not None:
            for line in report.to_lines():
                key, _, value = line.partition(": ")
                if key not in values:
                    values[key] = value
        if self.language is not None:
            values['accepting-classes'] = len(self.language.accepting_classes)
        return values

    def run(self) -> Dict[str, Any]:
        """
        Run every step, stopping at the first failure

        Returns:
            Summary with success flag, exit code, per-step results and the
            report values
        """
        self.start_time = time.time()
        self.workflow_status = "running"
        steps: List[tuple] = [
            ('load', "Load inputs", self._load_inputs),
            ('monoid', "Transition monoid", self._build_monoid),
            ('synthesize', "Synthesize and verify", self._synthesize),
            ('quotient', "Quotient and accepting classes", self._build_quotient),
            ('cross_check', "Cross-check against the DFA", self._cross_check),
        ]
        if self.out_path is not None:
            steps.append(('write', "Write artifacts", self._write_artifacts))
        failure: Optional[Dict[str, Any]] = None
        for step_num, (key, title, action) in enumerate(steps, start=1):
            result = self._run_step(step_num, key, title, action)
            if not result.get('success', False):
                failure = result
                break
        self.workflow_status = "completed" if failure is None else "failed"
        return self._generate_summary(failure)

    def _generate_summary(self, failure: Optional[Dict[str, Any]]) -> Dict[str, Any]:
        summary = {
            'success': failure is None,
            'exit_code': 0 if failure is None else failure.get('exit_code', 1),
            'error': None if failure is None else failure.get('error'),
            'stage': None if failure is None else failure.get('stage'),
            'status': self.workflow_status,
            'step_results': self.step_results,
            'duration': time.time() - self.start_time,
        }
        if failure is None:
            summary['report'] = self.report_values()
        log(f"workflow {self.workflow_status} in {summary['duration']:.2f}s")
        return summary
