import gzip
import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(__file__).parent / "data"

# ClassA has no constructor, ClassB has one; Main creates both.
FIG2 = """\
class ClassA {
    int value = 1;

    int getValue() {
        return value;
    }
}

class ClassB {
    int total;

    ClassB(int start) {
        total = start;
    }

    int add(int amount) {
        total = total + amount;
        return total;
    }
}

public class Main {
    public static void main(String[] args) {
        ClassA a = new ClassA();
        ClassB b = new ClassB(5);
        int v = a.getValue();
        int w = b.add(v);
        System.out.println(w);
    }
}
"""

MUTATE = """\
class Box {
    void fill(java.util.List<Integer> xs) {
        xs.add(1);
    }

    void run() {
        java.util.List<Integer> items = new java.util.ArrayList<>();
        fill(items);
        int n = items.size();
    }
}
"""

PRIMITIVE = """\
class Box {
    void bump(int x) {
        x = x + 1;
    }

    void run() {
        int count = 0;
        bump(count);
        int n = count;
    }
}
"""

TEN_STATEMENTS = """\
class T {
    int f(int n) {
        int s = 0;
        int i = 0;
        while (i < n) {
            if (i % 2 == 0) {
                s = s + i;
            } else {
                s = s - 1;
            }
            i = i + 1;
        }
        int t = s * 2;
        t = t + n;
        return t;
    }
}
"""


def load_corpus():
    with gzip.open(DATA / "java_methods.jsonl.gz", "rt", encoding="utf-8") as fh:
        return [json.loads(line) for line in fh]


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for cid in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[cid][1])
