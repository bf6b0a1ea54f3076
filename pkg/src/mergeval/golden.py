"""Built-in scenarios with known tool behaviour, used as regression fixtures.

Each entry gives base/left/right/expected texts per file. ``documented``
records outputs particular tools are known to produce on the scenario,
keyed by tool name then path.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .evalharness import FileTriple, MergeScenario
from .textmodel import split_lines


@dataclass(frozen=True)
class GoldenCase:
    id: str
    files: dict  # path -> (base, left, right, expected)
    tags: dict = field(default_factory=dict)
    notes: str = ""
    documented: dict = field(default_factory=dict)  # tool -> path -> text

    def scenario(self) -> MergeScenario:
        triples = tuple(FileTriple(p, split_lines(b), split_lines(l), split_lines(r))
                        for p, (b, l, r, _) in sorted(self.files.items()))
        expected = {p: split_lines(e) for p, (_, _, _, e) in self.files.items()}
        return MergeScenario(self.id, triples, expected, dict(self.tags), self.notes)


_RENAME_VALUE_BASE = """\
def main():
    n = 128
    print(n)
"""
_RENAME_VALUE_LEFT = """\
def main():
    n_people = 128
    print(n_people)
"""
_RENAME_VALUE_RIGHT = """\
def main():
    n = 64
    print(n)
"""
_RENAME_VALUE_MERGED = """\
def main():
    n_people = 64
    print(n_people)
"""

_RENAME_CALL_BASE = """\
def mult(a,b):
    return a*b
def main():
    a = 3*5
    print(a)
"""
_RENAME_CALL_LEFT = """\
def multiply(a,b):
    return a*b
def main():
    a = 3*5
    print(a)
"""
_RENAME_CALL_RIGHT = """\
def mult(a,b):
    return a*b
def main():
    a = mult(3,5)
    print(a)
"""
_RENAME_CALL_LINE_MERGE = """\
def multiply(a,b):
    return a*b
def main():
    a = mult(3,5)
    print(a)
"""
_RENAME_CALL_CORRECT = """\
def multiply(a,b):
    return a*b
def main():
    a = multiply(3,5)
    print(a)
"""

_RANGES_BASE = "HashSet<Range> ranges = new HashSet<Range>();\n"
_RANGES_LEFT = "HashSet<Range> ranges = new HashSet<>();\n"
_RANGES_RIGHT = "Set<Range> ranges = new HashSet<Range>();\n"
_RANGES_MERGED = "Set<Range> ranges = new HashSet<>();\n"

_POM_23 = "<version>{}</version>\n"
_POM_SNAPSHOT = "<version>{}-SNAPSHOT</version>\n"

_PARSER_BASE = """\
String comments = SourcesHelper.readerToString(reader);
CompilationUnit cu = new InstanceJavaParser(comments).parse();
"""
_PARSER_LEFT = """\
String comments = SourcesHelper.readerToString(reader);
CompilationUnit cu = new JavaParser().setSource(comments).parse();
"""
_PARSER_RIGHT = """\
String comments = readerToString(reader);
CompilationUnit cu = new InstanceJavaParser(comments).parse();
"""
_PARSER_MERGED = """\
String comments = readerToString(reader);
CompilationUnit cu = new JavaParser().setSource(comments).parse();
"""

_DNS_TAIL = """\
    }
}
/* Remove from DNS cache when no records remain with this key */
if (result && entryList.isEmpty()) {
    this.remove(dnsEntry.getKey());
}
"""
_DNS_BASE = """\
List<DNSEntry> entryList = this.get(dnsEntry.getKey());
if (entryList != null) {
    synchronized (entryList) {
        entryList.remove(dnsEntry);
""" + _DNS_TAIL
_DNS_LEFT = """\
synchronized (cacheMap) {
    List<DNSEntry> entryList = cacheMap.get(dnsEntry.getKey());
    if (entryList != null) {
        entryList.remove(dnsEntry);
""" + _DNS_TAIL
_DNS_RIGHT = """\
List<DNSEntry> entryList = this.get(dnsEntry.getKey());
if (entryList != null) {
    synchronized (entryList) {
        result = entryList.remove(dnsEntry);
""" + _DNS_TAIL
_DNS_ADJACENT = """\
synchronized (cacheMap) {
    List<DNSEntry> entryList = cacheMap.get(dnsEntry.getKey());
    if (entryList != null) {
        result = entryList.remove(dnsEntry);
""" + _DNS_TAIL
_DNS_PROGRAMMER = """\
synchronized (cacheMap) {
    List<DNSEntry> entryList = cacheMap.get(dnsEntry.getKey());
    if (entryList != null) {
        result = entryList.remove(dnsEntry);
    }
    /* Remove from DNS cache when no records remain with this key */
    if (result && entryList.isEmpty()) {
        cacheMap.remove(dnsEntry.getKey());
    }
}
"""

_JAVADOC_BASE = "/**\n * Parses input.\n * \n */\n"
_JAVADOC_LEFT = "/**\n * Parses input.\n * </p>\n */\n"
_JAVADOC_RIGHT = "/**\n * Parses input.\n *\n */\n"

# A wrong clean hunk (both parents add the same method in different places)
# next to a conflict the import fixup can finish.
_UTIL_BASE = """\
public class Util {
    int a() {
        return 1;
    }

    int b() {
        return 2;
    }
}
"""
_UTIL_LEFT = """\
public class Util {
    int helper() {
        return 0;
    }

    int a() {
        return 1;
    }

    int b() {
        return 2;
    }
}
"""
_UTIL_RIGHT = """\
public class Util {
    int a() {
        return 1;
    }

    int b() {
        return 2;
    }

    int helper() {
        return 0;
    }
}
"""
_MAIN_BASE = """\
package demo;

import java.util.List;

public class Main {
    List<String> names;

    void first() {
    }

    void second() {
    }
}
"""
_MAIN_LEFT = """\
package demo;

import java.util.List;
import java.util.Map;

public class Main {
    List<String> names;

    void first() {
        Map<String, String> m = null;
    }

    void second() {
    }
}
"""
_MAIN_RIGHT = """\
package demo;

import java.util.List;
import java.util.Set;

public class Main {
    List<String> names;

    void first() {
    }

    void second() {
        Set<String> s = null;
    }
}
"""
_MAIN_MERGED = """\
package demo;

import java.util.List;
import java.util.Map;
import java.util.Set;

public class Main {
    List<String> names;

    void first() {
        Map<String, String> m = null;
    }

    void second() {
        Set<String> s = null;
    }
}
"""

GOLDEN_CASES: tuple[GoldenCase, ...] = (
    GoldenCase(
        "rename-vs-value",
        {"main.py": (_RENAME_VALUE_BASE, _RENAME_VALUE_LEFT, _RENAME_VALUE_RIGHT, _RENAME_VALUE_MERGED)},
        tags={"source": "main"},
        notes="rename and value change on the same line; line merge conflicts",
        documented={"hires": {"main.py": _RENAME_VALUE_MERGED}},
    ),
    GoldenCase(
        "rename-vs-call",
        {"main.py": (_RENAME_CALL_BASE, _RENAME_CALL_LEFT, _RENAME_CALL_RIGHT, _RENAME_CALL_CORRECT)},
        tags={"source": "main"},
        notes="line merge is clean but calls the renamed function by its old name",
        documented={"gitline": {"main.py": _RENAME_CALL_LINE_MERGE}},
    ),
    GoldenCase(
        "3183-11",
        {"Ranges.java": (_RANGES_BASE, _RANGES_LEFT, _RANGES_RIGHT, _RANGES_MERGED)},
        tags={"source": "main"},
        notes="two inline refactorings of one declaration",
        documented={"hires": {"Ranges.java": _RANGES_MERGED}},
    ),
    GoldenCase(
        "25267-730",
        {"pom.xml": (_POM_23.format("23.6.0"), _POM_23.format("23.7.0"),
                     _POM_23.format("23.6.1"), _POM_23.format("23.7.0"))},
        tags={"source": "main"},
        notes="character merge invents a version neither parent has",
        documented={"hires": {"pom.xml": _POM_23.format("23.7.1")},
                    "ivn": {"pom.xml": _POM_23.format("23.7.0")}},
    ),
    GoldenCase(
        "18228-77",
        {"pom.xml": (_POM_SNAPSHOT.format("2.3.1"), _POM_SNAPSHOT.format("2.4.1"),
                     _POM_SNAPSHOT.format("2.4.3"), _POM_SNAPSHOT.format("2.4.3"))},
        tags={"source": "other"},
        documented={"hires": {"pom.xml": _POM_SNAPSHOT.format("2.4.3")},
                    "ivn": {"pom.xml": _POM_SNAPSHOT.format("2.4.3")}},
    ),
    GoldenCase(
        "1215-3280",
        {"Sources.java": (_PARSER_BASE, _PARSER_LEFT, _PARSER_RIGHT, _PARSER_MERGED)},
        tags={"source": "main"},
        notes="independent refactorings on neighbouring lines",
        documented={"adjacent": {"Sources.java": _PARSER_MERGED}},
    ),
    GoldenCase(
        "5184-31",
        {"DNSCache.java": (_DNS_BASE, _DNS_LEFT, _DNS_RIGHT, _DNS_PROGRAMMER)},
        tags={"source": "main"},
        notes="neighbouring edits that depend on each other; the clean splice races",
        documented={"adjacent": {"DNSCache.java": _DNS_ADJACENT}},
    ),
    GoldenCase(
        "2955-73",
        {"Parser.java": (_JAVADOC_BASE, _JAVADOC_LEFT, _JAVADOC_RIGHT, _JAVADOC_LEFT)},
        tags={"source": "other"},
        notes="base line carries a trailing space the right parent removed",
        documented={"gitline-ignorespace": {"Parser.java": _JAVADOC_LEFT}},
    ),
    GoldenCase(
        "wrong-hunk-plus-import-conflict",
        {"Util.java": (_UTIL_BASE, _UTIL_LEFT, _UTIL_RIGHT, _UTIL_LEFT),
         "Main.java": (_MAIN_BASE, _MAIN_LEFT, _MAIN_RIGHT, _MAIN_MERGED)},
        notes="duplicated method merges cleanly; import conflict is fixable",
    ),
)


def golden_cases() -> tuple[GoldenCase, ...]:
    return GOLDEN_CASES


def import_golden_suite() -> list[MergeScenario]:
    return [c.scenario() for c in GOLDEN_CASES]


def golden_case(case_id: str) -> GoldenCase:
    for c in GOLDEN_CASES:
        if c.id == case_id:
            return c
    raise KeyError(case_id)
