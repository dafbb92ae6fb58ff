"""Java node-kind tables and grammar binding (tree-sitter-java)."""

from __future__ import annotations

from functools import lru_cache

from .base import LanguageSpec

PRIMITIVE_TYPES = frozenset(
    {"byte", "short", "int", "long", "float", "double", "boolean", "char", "void"}
)

# Statement kinds that become a single CFG node with sequential flow.
SIMPLE_STATEMENTS = frozenset(
    {
        "local_variable_declaration",
        "expression_statement",
        "explicit_constructor_invocation",
        "assert_statement",
        "yield_statement",
        "local_class_declaration",
        "class_declaration",
        "interface_declaration",
        "enum_declaration",
        "record_declaration",
        ";",
    }
)

TYPE_DECLARATIONS = frozenset(
    {
        "class_declaration",
        "interface_declaration",
        "enum_declaration",
        "record_declaration",
        "annotation_type_declaration",
    }
)

TYPE_BODIES = frozenset(
    {"class_body", "interface_body", "enum_body", "annotation_type_body", "enum_body_declarations"}
)

CALLABLES = frozenset({"method_declaration", "constructor_declaration", "compact_constructor_declaration"})

LOOPS = frozenset({"while_statement", "for_statement", "enhanced_for_statement", "do_statement"})

# Literal kind -> static type text used for overload matching.
LITERAL_TYPES = {
    "decimal_integer_literal": "int",
    "hex_integer_literal": "int",
    "octal_integer_literal": "int",
    "binary_integer_literal": "int",
    "decimal_floating_point_literal": "double",
    "hex_floating_point_literal": "double",
    "string_literal": "String",
    "text_block": "String",
    "character_literal": "char",
    "true": "boolean",
    "false": "boolean",
}

# Nodes whose interior is not evaluated where it appears.
DEFERRED_BODIES = frozenset({"lambda_expression", "class_body"})

COMMENT_KINDS = frozenset({"line_comment", "block_comment"})

WRAPPER_PREFIX = "class __CodeViewSnippet__ {\n"
WRAPPER_SUFFIX = "\n}\n"

JAVA = LanguageSpec(
    name="java",
    primitive_types=PRIMITIVE_TYPES,
    wrapper_prefix=WRAPPER_PREFIX,
    wrapper_suffix=WRAPPER_SUFFIX,
    comment_kinds=COMMENT_KINDS,
)


@lru_cache(maxsize=None)
def grammar():
    import tree_sitter_java
    from tree_sitter import Language

    return Language(tree_sitter_java.language())
