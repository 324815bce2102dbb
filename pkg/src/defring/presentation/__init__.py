from .builders import GAMMA_LETTER, NewTame, PlaceSpec, build_neumann_augmented, build_wingberg
from .dsl import (
    ParseError,
    parse_presentation,
    parse_word,
    presentation_from_dict,
    presentation_from_json,
    presentation_to_dict,
    presentation_to_json,
    render_presentation,
    render_word,
)
from .model import (
    Block,
    BorelCaseError,
    Character,
    DiagonalCharacters,
    GenMeta,
    ImageShape,
    IncomparableCharacters,
    Presentation,
    Tie,
    ValidationError,
    Variable,
    VariableTable,
    Violation,
    allocate_variables,
    classify_image,
    structural,
    validate,
)

__all__ = [
    "Block",
    "BorelCaseError",
    "Character",
    "DiagonalCharacters",
    "GAMMA_LETTER",
    "GenMeta",
    "ImageShape",
    "IncomparableCharacters",
    "NewTame",
    "ParseError",
    "PlaceSpec",
    "Presentation",
    "Tie",
    "ValidationError",
    "Variable",
    "VariableTable",
    "Violation",
    "allocate_variables",
    "build_neumann_augmented",
    "build_wingberg",
    "classify_image",
    "parse_presentation",
    "parse_word",
    "presentation_from_dict",
    "presentation_from_json",
    "presentation_to_dict",
    "presentation_to_json",
    "render_presentation",
    "render_word",
    "structural",
    "validate",
]
