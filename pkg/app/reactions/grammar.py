# app/reactions/grammar.py
#
# Line grammar of the reaction DSL:
#
#   reaction := side arrow side
#   side     := [term ("+" term)*]
#   term     := [coefficient] species
#   arrow    := "<->" | "->"
#
# "#" starts a comment. One reaction per line.

from typing import List, NamedTuple, Tuple
import pyparsing


class ParsedTerm(NamedTuple):
    coefficient: int
    species: str


class ParsedReaction(NamedTuple):
    left: Tuple[ParsedTerm, ...]
    right: Tuple[ParsedTerm, ...]
    reversible: bool


def make_identifier_grammar(start_characters: str) -> pyparsing.ParserElement:
    identifier_start = pyparsing.Word(start_characters, exact=1)
    identifier_remainder = pyparsing.Optional(pyparsing.Word(pyparsing.alphanums + "_"))
    return pyparsing.Combine(identifier_start + identifier_remainder)


identifier = make_identifier_grammar(pyparsing.alphas + "_").set_name("species name")

coefficient = pyparsing.Word(pyparsing.nums).set_name("coefficient")
coefficient.set_parse_action(lambda tokens: int(tokens[0]))
coefficient.add_condition(lambda tokens: tokens[0] >= 1, message="coefficient must be a positive integer", fatal=True)

term = pyparsing.Optional(coefficient, default=1) + identifier
term.set_parse_action(lambda tokens: ParsedTerm(tokens[0], tokens[1]))

side = pyparsing.Group(pyparsing.Optional(term + pyparsing.ZeroOrMore(pyparsing.Suppress("+") + term)))
side.set_parse_action(lambda tokens: tuple(tokens[0]))

arrow = pyparsing.Literal("<->") | pyparsing.Literal("->")
arrow.set_name("arrow")

reaction_grammar = side + arrow + side + pyparsing.StringEnd()
reaction_grammar.set_parse_action(
    lambda tokens: ParsedReaction(tuple(tokens[0]), tuple(tokens[2]), tokens[1] == "<->")
)


def strip_comment(line: str) -> str:
    return line.split("#", 1)[0]


def parse_reaction_line(line: str) -> ParsedReaction:
    """Parse one (comment-free) line; raises pyparsing.ParseException."""
    return reaction_grammar.parse_string(line, parse_all=True)[0]


def reaction_lines(text: str) -> List[Tuple[int, str]]:
    """Non-blank, comment-stripped lines with their 1-based line numbers."""
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = strip_comment(raw)
        if line.strip():
            lines.append((number, line))
    return lines
