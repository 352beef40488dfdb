from .program import (FALSE_ATOM, Literal, Polarity, Program, ProgramBuilder,
                      ProgramError, Rule, RuleKind, Solution, basic, canonical,
                      cardinality, choice, constraint, neg, notnot, parse_atom_name,
                      pos, predicate_of, project, structurally_equal)
from .semantics import (AtomCapExceeded, ConstraintViolated, enumerate_bruteforce,
                        is_answer_set, least_model, reduct)
from .formats import ParseError, UnsupportedRule, parse, serialize

Interpretation = frozenset
