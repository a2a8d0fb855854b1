"""q-boson algebras: Serre-quotient bases and normal-ordered elements."""

from .basis import reduce_to_basis, serre_element, weight_basis, weight_space, words_of_weight
from .element import (AlgebraElement, Flavor, NormalWord, commute_edd_power, multiply, product,
                      render, straighten, word_element)

__all__ = [
    "AlgebraElement", "Flavor", "NormalWord", "commute_edd_power", "multiply", "product",
    "reduce_to_basis", "render", "serre_element", "straighten", "weight_basis", "weight_space",
    "word_element", "words_of_weight",
]
