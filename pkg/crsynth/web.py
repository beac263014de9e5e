"""
Flask JSON API over the synthesizer and verifier
"""

from typing import Any, Dict, List, Optional, Tuple

from flask import Flask, jsonify, request
from pydantic import BaseModel, Field, ValidationError

from .algebra import transition_monoid
from .config import Strategy, SynthesisOptions, WebSettings
from .errors import CrsError, InvalidInputError, ResourceCapError
from .formats import emit_classes, emit_system, parse_classes, parse_dfa, parse_system
from .rewriting import normalize, normalize_trace, verify_crs
from .workflow import SynthesisWorkflow


class NormalizeRequest(BaseModel):
    system: str
    word: str = ""


class MemberRequest(BaseModel):
    system: str
    classes: str
    words: List[str] = Field(default_factory=list)


class CheckRequest(BaseModel):
    system: str
    dfa: Optional[str] = None


class SynthRequest(BaseModel):
    dfa: str
    alphabet: str
    strategy: Strategy = "auto"
    max_rules: Optional[int] = Field(default=None, ge=1)
    max_irr: Optional[int] = Field(default=None, ge=1)
    retries: Optional[int] = Field(default=None, ge=0)
    check_length: Optional[int] = Field(default=None, ge=0)
    workers: Optional[int] = Field(default=None, ge=1)


def _error(error: Exception) -> Tuple[Any, int]:
    if isinstance(error, ResourceCapError):
        return jsonify({'error': str(error), 'stage': error.stage, 'cap': error.cap, 'count': error.count}), 503
    return jsonify({'error': str(error)}), 400


def _payload(model: type) -> BaseModel:
    data = request.get_json(silent=True)
    if data is None:
        raise InvalidInputError("a JSON body is required")
    try:
        return model(**data)
    except ValidationError as e:
        raise InvalidInputError(f"invalid request: {e}") from None


def create_app(settings: Optional[WebSettings] = None) -> Flask:
    """
    Build the Flask application

    Args:
        settings: Secret key and debug flag; read from the environment when omitted

    Returns:
        Configured Flask app
    """
    settings = settings or WebSettings.from_env()
    app = Flask(__name__)
    app.config['SECRET_KEY'] = settings.secret_key
    app.config['DEBUG'] = settings.debug

    @app.route('/health')
    def health():
        return jsonify({'status': 'ok'})

    @app.route('/api/normalize', methods=['POST'])
    def api_normalize():
        """Normal form and rewrite trace of one word"""
        try:
            payload = _payload(NormalizeRequest)
            system = parse_system(payload.system)
            normal_form, trace = normalize_trace(system, system.alphabet.parse(payload.word))
            return jsonify({
                'normal_form': str(normal_form),
                'steps': len(trace),
                'trace': [{'position': position, 'rule': rule} for position, rule in trace],
            })
        except CrsError as e:
            return _error(e)

    @app.route('/api/member', methods=['POST'])
    def api_member():
        """Membership of each word through its normal form and the accepting classes"""
        try:
            payload = _payload(MemberRequest)
            system = parse_system(payload.system)
            accepted = {word.code for word in parse_classes(payload.classes, system.alphabet)}
            results: List[Dict[str, Any]] = []
            for text in payload.words:
                word = system.alphabet.parse(text)
                normal_form, steps = normalize(system, word)
                results.append({
                    'word': str(word),
                    'normal_form': str(normal_form),
                    'steps': steps,
                    'accepted': normal_form.code in accepted,
                })
            return jsonify({'results': results})
        except CrsError as e:
            return _error(e)

    @app.route('/api/check', methods=['POST'])
    def api_check():
        """Verify a system, optionally against a DFA's transition monoid"""
        try:
            payload = _payload(CheckRequest)
            system = parse_system(payload.system)
            hom = None
            if payload.dfa is not None:
                _, hom, _ = transition_monoid(parse_dfa(payload.dfa, system.alphabet))
            report = verify_crs(system, hom)
            return jsonify({
                'passed': report.passed,
                'index': report.index,
                'rules': report.rule_count,
                'weight_reducing': report.weight_reducing,
                'confluent': report.confluent,
                'finite_index': report.finite_index,
                'invariant': report.invariant,
                'failure': report.first_failure(),
            })
        except CrsError as e:
            return _error(e)

    @app.route('/api/synth', methods=['POST'])
    def api_synth():
        """Run the synthesis workflow in memory and return the system and classes"""
        try:
            payload = _payload(SynthRequest)
            options = SynthesisOptions.from_env(
                strategy=payload.strategy,
                max_rules=payload.max_rules,
                max_irr=payload.max_irr,
                retries=payload.retries,
                check_length=payload.check_length,
                workers=payload.workers,
                verbose=False,
            )
        except CrsError as e:
            return _error(e)
        except ValidationError as e:
            return jsonify({'error': f"invalid options: {e}"}), 400

        workflow = SynthesisWorkflow(options=options, alphabet_text=payload.alphabet, dfa_text=payload.dfa)
        summary = workflow.run()
        if not summary['success']:
            status = 503 if summary['exit_code'] == ResourceCapError.exit_code else 400
            return jsonify({'error': summary['error'], 'stage': summary['stage']}), status
        return jsonify({
            'success': True,
            'system': emit_system(workflow.system),
            'classes': emit_classes(workflow.language.accepting_words),
            'report': summary['report'],
            'duration': summary['duration'],
        })

    @app.errorhandler(404)
    def not_found(error):
        return jsonify({'error': 'Not found'}), 404

    @app.errorhandler(500)
    def internal_error(error):
        return jsonify({'error': 'Internal server error'}), 500

    return app
