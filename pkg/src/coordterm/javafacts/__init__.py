"""Java-subset static analysis: class tables, taxonomies, code contexts."""
from .extract import build_facts, parse_source_tree, parse_sources
from .facts import (
    MAX_ANCESTRY_LEVEL,
    ClassEntry,
    CodeFacts,
    FactsFormatError,
    PackageTaxonomy,
    TaxonomyCycleError,
    TypeTaxonomy,
    UnknownClassError,
    ancestors_within,
    load_facts,
    save_facts,
)
from .lexer import JavaSyntaxError
from .parser import parse_java

__all__ = [
    "MAX_ANCESTRY_LEVEL",
    "ClassEntry",
    "CodeFacts",
    "FactsFormatError",
    "JavaSyntaxError",
    "PackageTaxonomy",
    "TaxonomyCycleError",
    "TypeTaxonomy",
    "UnknownClassError",
    "ancestors_within",
    "build_facts",
    "load_facts",
    "parse_java",
    "parse_source_tree",
    "parse_sources",
    "save_facts",
]
