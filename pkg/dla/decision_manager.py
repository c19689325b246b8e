import logging
import os

from dla import classify, constructor, formats
from dla.classify import Answer
from dla.errors import ConstructionError, ParseError, WitnessRejected
from dla.exhaustions import profile_of
from dla.steinitz import parse_steinitz

logger = logging.getLogger(__name__)


def read_source(source):
    """Contents of the file named by source, or source itself when it is not a file"""
    if os.path.isfile(source):
        with open(source, encoding='utf-8') as f:
            return f.read()
    return source


class DecisionManager:
    """
    Runs the decision procedures and constructors with the settings of a
    ConfigManager. Inputs are file paths or inline literals.
    """

    def __init__(self, config_manager):
        self.config = config_manager

    @property
    def precision(self):
        return self.config.precision

    def load(self, source):
        """(profile, descriptor or None) of a descriptor file, profile file or inline descriptor"""
        return formats.read_algebra(read_source(source), self.precision,
                                    self.config.refinement_rounds)

    def profile(self, source):
        return self.load(source)[0]

    def isomorphic(self, a, b):
        (p1, _), (p2, _) = self.load(a), self.load(b)
        return classify.isomorphic(p1, p2, self.precision, self.config.refinement_rounds,
                                   self.config.alpha_search_bound)

    def equivalent(self, a, b):
        (p1, _), (p2, _) = self.load(a), self.load(b)
        return classify.equivalent(p1, p2, self.precision, self.config.refinement_rounds)

    def universal(self, a):
        return classify.universality(self.profile(a))

    def embeds(self, a, b, witness_depth=None):
        """
        Embedding verdict plus, on Yes for descriptor inputs, a verified diagram.

        Returns:
            tuple: (Verdict, EmbeddingDiagram or None, note on a skipped witness or None)

        Raises:
            WitnessRejected: the built diagram failed verify_diagram
        """
        (p1, d1), (p2, d2) = self.load(a), self.load(b)
        verdict = classify.embeds(p1, p2, self.precision, self.config.refinement_rounds)
        if verdict.answer is not Answer.YES or not witness_depth:
            return verdict, None, None
        if d1 is None or d2 is None:
            return verdict, None, "witness needs descriptor inputs"
        try:
            diagram = self._build(d1, d2, witness_depth)
        except WitnessRejected:
            raise
        except ConstructionError as e:
            logger.info(f"No witness for {a} -> {b}: {e}")
            return verdict, None, str(e)
        return verdict, diagram, None

    def _build(self, d1, d2, depth):
        return constructor.build_diagram(d1, d2, depth, self.precision,
                                         self.config.refinement_rounds,
                                         self.config.target_search_limit)

    def diagram(self, a, b, depth=None):
        (_, d1), (_, d2) = self.load(a), self.load(b)
        if d1 is None or d2 is None:
            raise ConstructionError("diagrams are built from descriptors, not profiles")
        return self._build(d1, d2, depth if depth is not None else self.config.witness_depth)

    def target_factors(self, target):
        """Factor stream of a descriptor source or a Steinitz literal"""
        text = read_source(target)
        try:
            return constructor.steinitz_factors(parse_steinitz(text.strip()))
        except ParseError:
            pass
        _, descriptor = self.load(target)
        if descriptor is None:
            raise ConstructionError("triangle targets are Steinitz literals or descriptors")
        return constructor.descriptor_factors(descriptor)

    def triangle(self, q, target, depth=None):
        depth = depth if depth is not None else self.config.depth
        return constructor.build_triangle(q, self.target_factors(target), depth)

    def check(self, source):
        """
        Verify a diagram or triangle file. Diagrams are also checked for the
        index divisibility of their first levels.
        """
        text = read_source(source)
        first = text.lstrip().split(None, 1)[0] if text.strip() else ""
        if first == "triangle":
            return "triangle", constructor.verify_triangle(formats.parse_triangle(text))
        diagram = formats.parse_diagram(text)
        report = constructor.verify_diagram(diagram)
        if report.ok:
            p1 = profile_of(diagram.source, self.precision, self.config.refinement_rounds)
            p2 = profile_of(diagram.target, self.precision, self.config.refinement_rounds)
            if not classify.index_divisibility_check(p1, p2, diagram, len(diagram.levels)):
                report = constructor.CheckReport(False, ("index products do not divide",))
        return "diagram", report
