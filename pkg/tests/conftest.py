import hypothesis.strategies as st
from hypothesis import settings

from surprise_exam.formula.tree import (
    D,
    And,
    CodePred,
    Conj,
    DayAtom,
    Falsum,
    Iff,
    Imp,
    Implies,
    Know,
    Neg,
    Not,
    Numeral,
    Or,
    Var,
    Xor,
)

settings.register_profile("default", deadline=None)
settings.load_profile("default")

numerals = st.one_of(
    st.integers(0, 9), st.integers(0, 10**6), st.integers(0, 10**60)
).map(Numeral)


def terms(allow_var=True):
    leaves = st.one_of(numerals, st.just(Var())) if allow_var else numerals
    return st.recursive(
        leaves,
        lambda t: st.one_of(
            t.map(Neg),
            st.tuples(t, t).map(lambda p: Conj(*p)),
            st.tuples(t, t).map(lambda p: Imp(*p)),
            st.tuples(t, t).map(lambda p: D(*p)),
        ),
        max_leaves=6,
    )


def formulas(modal=True, labels=("P", "K"), allow_var=True):
    atoms = st.one_of(
        st.integers(1, 12).map(DayAtom),
        st.tuples(st.sampled_from(labels), terms(allow_var)).map(lambda p: CodePred(*p)),
        st.just(Falsum()),
    )

    def extend(f):
        options = [
            f.map(Not),
            *(
                st.tuples(f, f).map(lambda p, c=c: c(*p))
                for c in (And, Or, Xor, Implies, Iff)
            ),
        ]
        if modal:
            agents = st.sampled_from(["a", "b", "1", "2", "Art", "Eric"])
            options.append(st.tuples(agents, f).map(lambda p: Know(*p)))
        return st.one_of(options)

    return st.recursive(atoms, extend, max_leaves=12)


propositional = st.recursive(
    st.integers(1, 5).map(DayAtom) | st.just(Falsum()),
    lambda f: st.one_of(
        f.map(Not),
        *(st.tuples(f, f).map(lambda p, c=c: c(*p)) for c in (And, Or, Xor, Implies, Iff)),
    ),
    max_leaves=10,
)


ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
