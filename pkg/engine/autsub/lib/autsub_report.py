"""
This module renders the results of the autsub commands as text, JSON or
Graphviz DOT.

AutsubReport:
    Base class fixing the JSON envelope of every report.
AnalyzeReport:
    Invariants of one substitution (height, column number, bounds).
AutReport:
    The automorphism group presentation.
ConjugacyReport:
    The conjugacy decision for two substitutions.
LanguageReport:
    The words of one length.
GraphReport:
    The subset graph.
ErrorReport:
    A failed run, flagged as not authoritative.
"""

import os
import json
import logging
from typing import Dict, Any, List, Optional, Sequence

from ..__version__ import VERSION
from ..autgroup import AutPresentation, PRUNED, one_sided_aut
from ..blockcode import BlockCode, trim_radius
from ..conj import ConjReport
from ..exceptions import PreconditionError
from ..limits import DEFAULT_LIMITS, Limits
from ..radic import RAdicRational, expand
from ..reduce import height, injectivize, pure_base
from ..sofic import SubsetAutomaton, subset_graph, to_dot
from ..substitution import Substitution, is_infinite, is_injective, \
    is_primitive, render_word

logger = logging.getLogger(__name__)

__all__ = [
    "AutsubReport",
    "AnalyzeReport",
    "AutReport",
    "ConjugacyReport",
    "LanguageReport",
    "GraphReport",
    "ErrorReport",
    "SCHEMA_FILE",
]

SCHEMA_FILE = os.path.join(
    os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
    "schema", "report.schema.json")

TEXT = "text"
JSON = "json"
DOT = "dot"

# Tables with more windows are summarized in text output.
MAX_TEXT_WINDOWS = 64


def format_kappa(kappa: Optional[RAdicRational]) -> str:
    """
    "-1/2 = (1)" style: the reduced rational and its digit expansion.
    """
    if kappa is None:
        return "unknown"
    return f"{kappa} = {expand(kappa).render()}"


def format_code(name: str, code: BlockCode) -> List[str]:
    lines = [f"{name}: radii ({code.left}, {code.right}), "
             f"κ = {format_kappa(code.kappa)}"]
    items = code.sorted_items()
    if len(items) > MAX_TEXT_WINDOWS:
        lines.append(f"    ({len(items)} windows)")
        return lines
    for window, symbol in items:
        lines.append(f"    {render_word(window)} -> {symbol}")
    return lines


class AutsubReport:
    """
    Base class that defines the JSON envelope of every report:

        {COMMAND_FIELD, VERSION_FIELD, INPUTS_FIELD, RESULT_FIELD}

    Subclasses provide the result object and the text rendering; DOT is
    only available where a subset graph is part of the result.
    """

    COMMAND_FIELD = "command"
    VERSION_FIELD = "version"
    INPUTS_FIELD = "inputs"
    RESULT_FIELD = "result"

    command: str = ""

    def __init__(self, inputs: Sequence[str]):
        """
        Args:
            inputs: Paths of the substitution files, as given by the user.
        """
        self.inputs: List[str] = list(inputs)

    def result_json(self) -> Dict[str, Any]:
        raise NotImplementedError

    def to_json(self) -> Dict[str, Any]:
        return {
            self.COMMAND_FIELD: self.command,
            self.VERSION_FIELD: VERSION,
            self.INPUTS_FIELD: self.inputs,
            self.RESULT_FIELD: self.result_json(),
        }

    def to_text(self) -> str:
        raise NotImplementedError

    def to_dot(self) -> str:
        raise PreconditionError(
            f"format '{DOT}' is not available for '{self.command}'")

    def render(self, fmt: str) -> str:
        if fmt == JSON:
            return json.dumps(self.to_json(), sort_keys=True, indent=4,
                              ensure_ascii=False) + "\n"
        if fmt == DOT:
            return self.to_dot()
        return self.to_text()

    @property
    def exit_code(self) -> int:
        return 0


class AnalyzeReport(AutsubReport):
    """
    Invariants of a single substitution. Example usage:

        report = AnalyzeReport.build(substitution, "thue_morse.sub")
        print(report.render("text"))

    The height, injectivization and subset graph are only computed for
    primitive substitutions with an infinite shift.
    """

    command = "analyze"

    def __init__(self, inputs: Sequence[str], substitution: Substitution,
                 fields: Dict[str, Any],
                 automaton: Optional[SubsetAutomaton] = None):
        super().__init__(inputs)
        self.substitution = substitution
        self.fields = fields
        self.automaton = automaton

    @classmethod
    def build(cls, s: Substitution, path: str,
              limits: Limits = DEFAULT_LIMITS) -> "AnalyzeReport":
        fields: Dict[str, Any] = {
            "r": s.r,
            "alphabet": list(s.alphabet),
            "primitive": is_primitive(s),
            "injective": is_injective(s),
            "infinite": None,
        }
        if not fields["primitive"]:
            return cls([path], s, fields)
        fields["infinite"] = is_infinite(s, limits)
        if not fields["infinite"]:
            return cls([path], s, fields)

        report = height(s, limits)
        tower = pure_base(s, report, limits)
        inj = injectivize(tower.base, limits)
        automaton = subset_graph(inj.target, limits)
        fields.update({
            "height": report.to_json(),
            "pure_base": tower.to_json(),
            "injectivization": inj.to_json(),
            "c": automaton.c,
            "j": automaton.j,
            "periodic_count": automaton.periodic_count,
            "sigma_empty": automaton.sigma_empty,
            "augment": automaton.augment,
            "denominator_bound": automaton.denominator_bound,
            "one_sided": one_sided_aut(inj.target, automaton,
                                       limits).to_json(),
        })
        return cls([path], s, fields, automaton)

    def result_json(self) -> Dict[str, Any]:
        return dict(self.fields)

    def to_text(self) -> str:
        f = self.fields
        lines = [f"Substitution ({self.inputs[0]}):"]
        lines.extend("    " + line
                     for line in self.substitution.to_text().splitlines())
        lines.append(f"length r: {f['r']}")
        lines.append(f"primitive: {f['primitive']}")
        lines.append(f"injective: {f['injective']}")
        if f["infinite"] is None:
            lines.append("not primitive: no further invariants")
            return "\n".join(lines) + "\n"
        lines.append(f"infinite: {f['infinite']}")
        if not f["infinite"]:
            lines.append("finite shift: no further invariants")
            return "\n".join(lines) + "\n"
        h = f["height"]
        lines.append(f"height h: {h['h']} (return lengths "
                     f"{h['return_lengths']}, gcd {h['g']})")
        base = f["pure_base"]
        if base["h"] > 1:
            lines.append(f"pure base: {len(base['base'])} aligned blocks, "
                         f"phase {base['phase']}, power {base['power']}")
        merges = f["injectivization"]["merges"]
        if merges:
            lines.append("merged letters: " + ", ".join(
                f"{b} -> {a}" for b, a in merges))
        lines.append(f"column number c: {f['c']}")
        lines.append(f"shortest forbidden length j: {f['j']}")
        lines.append(f"periodic points |P|: {f['periodic_count']}")
        lines.append(f"sigma empty: {f['sigma_empty']}")
        lines.append(f"augmented: {f['augment']}")
        lines.append(f"denominator bound r^j - 1: {f['denominator_bound']}")
        lines.append(f"one-sided Aut: {f['one_sided']['status']}")
        return "\n".join(lines) + "\n"

    def to_dot(self) -> str:
        if self.automaton is None:
            return super().to_dot()
        return to_dot(self.automaton)


class AutReport(AutsubReport):
    """
    Render an AutPresentation together with the observed dependence of
    every code: the least radii that still determine its output.
    """

    command = "aut"

    def __init__(self, inputs: Sequence[str],
                 presentation: AutPresentation,
                 limits: Limits = DEFAULT_LIMITS):
        super().__init__(inputs)
        self.presentation = presentation
        s = presentation.substitution
        self.dependence: Dict[str, List[int]] = {}
        if presentation.root is not None:
            self.dependence["G"] = self._radii(presentation.root, s, limits)
        for i, code in enumerate(presentation.kernel):
            self.dependence[f"K{i}"] = self._radii(code, s, limits)

    @staticmethod
    def _radii(code: BlockCode, s: Substitution, limits: Limits) -> List[int]:
        trimmed = trim_radius(code, s, limits)
        return [trimmed.left, trimmed.right]

    def result_json(self) -> Dict[str, Any]:
        out = self.presentation.to_json()
        out["dependence"] = self.dependence
        return out

    def to_text(self) -> str:
        p = self.presentation
        lines = ["Substitution:"]
        lines.extend("    " + line
                     for line in p.substitution.to_text().splitlines())
        if p.height is not None and p.height.h > 1:
            lines.append(f"height: {p.height.h}")
        if p.automaton is not None:
            lines.append(f"column number: {p.automaton.c}, "
                         f"j: {p.automaton.j}")
        for candidate in p.candidates:
            line = f"candidate d={candidate.d}: {candidate.verdict}"
            if candidate.verdict == PRUNED:
                line += f" ({candidate.admissibility.describe()})"
            lines.append(line)
        if p.root is None and len(p.kernel) == 1:
            lines.append(f"Aut ≅ {p.iso_type}, generated by the shift")
        else:
            lines.append(f"Aut ≅ {p.iso_type}")
        lines.append(f"|Aut / <σ>| = {p.quotient_order}")
        lines.append("End = Aut")
        if p.root is not None:
            lines.extend(format_code("generator G", p.root))
            lines.append(f"    κ(G⁻¹) = {format_kappa(-p.root.kappa)}")
        lines.append(f"kernel of κ: {p.kernel_name} "
                     f"({len(p.kernel)} elements)")
        for i, code in enumerate(p.kernel[1:], start=1):
            lines.extend(format_code(f"K{i}", code))
        if p.relations:
            lines.append("relations:")
            lines.extend(f"    {relation}" for relation in p.relations)
        lines.append("observed dependence (left, right): " + ", ".join(
            f"{name} {radii[0]},{radii[1]}"
            for name, radii in self.dependence.items()))
        if p.one_sided is not None:
            lines.append(f"one-sided Aut: {p.one_sided.status}")
        return "\n".join(lines) + "\n"

    def to_dot(self) -> str:
        if self.presentation.automaton is None:
            return super().to_dot()
        return to_dot(self.presentation.automaton)


class ConjugacyReport(AutsubReport):
    command = "conj"

    def __init__(self, inputs: Sequence[str], report: ConjReport):
        super().__init__(inputs)
        self.report = report

    @property
    def exit_code(self) -> int:
        return self.report.exit_code

    def result_json(self) -> Dict[str, Any]:
        return self.report.to_json()

    def to_text(self) -> str:
        r = self.report
        lines = [f"decision: {r.decision}"]
        if r.powers is not None:
            lines.append(f"aligned powers: θ^{r.powers[0]} and "
                         f"θ'^{r.powers[1]}")
        if r.obstruction:
            lines.append(f"obstruction: {r.obstruction}")
        if r.witness is not None:
            lines.extend(format_code("witness Φ0", r.witness))
            lines.extend(format_code("inverse", r.inverse))
            lines.append(f"all conjugacies: {r.all_conjugacies}")
        return "\n".join(lines) + "\n"


class LanguageReport(AutsubReport):
    command = "language"

    def __init__(self, inputs: Sequence[str], substitution: Substitution,
                 n: int, words):
        super().__init__(inputs)
        self.n = n
        self.words = [substitution.render(w)
                      for w in substitution.sorted_words(words)]

    def result_json(self) -> Dict[str, Any]:
        return {"n": self.n, "count": len(self.words), "words": self.words}

    def to_text(self) -> str:
        return "".join(word + "\n" for word in self.words)


class GraphReport(AutsubReport):
    command = "graph"

    def __init__(self, inputs: Sequence[str], automaton: SubsetAutomaton):
        super().__init__(inputs)
        self.automaton = automaton

    def result_json(self) -> Dict[str, Any]:
        return self.automaton.to_json()

    def to_text(self) -> str:
        a = self.automaton
        lines = ["vertices: " + " ".join(a.render(v) for v in a.vertices())]
        for source, target, labels in a.edges():
            label = ",".join(str(i) for i in labels)
            lines.append(f"{a.render(source)} --{label}--> "
                         f"{a.render(target)}")
        return "\n".join(lines) + "\n"

    def to_dot(self) -> str:
        return to_dot(self.automaton)


class ErrorReport(AutsubReport):
    """
    Stands in for the report of a run that failed. JSON output carries the
    error and marks the run as not authoritative; text output is empty, the
    message goes to the log.
    """

    ERROR_FIELD = "error"

    def __init__(self, command: str, inputs: Sequence[str],
                 error: Exception):
        super().__init__(inputs)
        self.command = command
        self.error = error

    def to_json(self) -> Dict[str, Any]:
        out = super().to_json()
        out[self.ERROR_FIELD] = {
            "type": type(self.error).__name__,
            "message": str(self.error),
            "cap": getattr(self.error, "cap", None),
        }
        return out

    def result_json(self) -> Dict[str, Any]:
        return {"authoritative": False}

    def to_text(self) -> str:
        return ""

    def to_dot(self) -> str:
        return ""
