"""Picture languages of any dimension: tiling systems, one-way cellular
automata, existential second-order logic, and the compilers between them."""

from .pictures import (
    BORDER,
    PADDING,
    FiniteStructure,
    Picture,
    RectPicture,
    bordered_value,
    coordinate_structure,
    enumerate_pictures,
    is_c_balanced,
    lex_successor,
    make_picture,
    picture_from_text,
    picture_to_text,
    pixel_structure,
    square_picture,
    word,
)

__all__ = [
    "BORDER",
    "PADDING",
    "FiniteStructure",
    "Picture",
    "RectPicture",
    "bordered_value",
    "coordinate_structure",
    "enumerate_pictures",
    "is_c_balanced",
    "lex_successor",
    "make_picture",
    "picture_from_text",
    "picture_to_text",
    "pixel_structure",
    "square_picture",
    "word",
]
