"""
Certificate replay.
Rebuilds every definability and separation claim from kripkebench.fixtures,
re-checks each certificate independently and reports a summary line per claim.
Exit status is non-zero if any claim does not hold.
"""
import sys

from kripkebench.config import configure_logging
from kripkebench.definability import Definable, check_definable, check_separation, clone_closure, is_closed
from kripkebench.fixtures import certificate_suite, separation_suite
from kripkebench.formula import in_fragment, render
from kripkebench.kripke import truth_set
from kripkebench.validity import LogicClass, Valid, check_equivalence, check_validity, godel_fan

GDL_EQUIVALENCE_BOUND = 5


def replay_definability() -> int:
    failures = 0
    for claim in certificate_suite():
        print(f"\n--- {claim.name}: {claim.description} ---")
        certificate = check_definable(claim.problem)
        if (certificate.decision == "DEFINABLE") != claim.definable:
            print(f"[Certify] 🛑 expected {'DEFINABLE' if claim.definable else 'NOT-DEFINABLE'}, got {certificate.decision}")
            failures += 1
            continue
        if isinstance(certificate, Definable):
            witness = certificate.witness
            sound = in_fragment(witness, claim.problem.fragment()) and \
                truth_set(claim.problem.model, witness) == claim.problem.target
            print(f"[Certify] witness: {render(witness)} ({'sound' if sound else 'UNSOUND'})")
            if claim.expected_equivalent is not None:
                verdict = check_equivalence(witness, claim.expected_equivalent, LogicClass.GDL, GDL_EQUIVALENCE_BOUND)
                same = isinstance(verdict, Valid)
                print(f"[Certify] GDL-equivalent to {render(claim.expected_equivalent)} up to "
                      f"{GDL_EQUIVALENCE_BOUND} worlds: {same}")
                sound = sound and same
        else:
            masks = [u.mask for u in certificate.closure]
            sound = is_closed(claim.problem, masks) and claim.problem.target.mask not in masks
            print(f"[Certify] closure of {len(masks)} upsets, fixpoint excluding {claim.problem.target}: {sound}")
        print("[Certify] ✅ holds" if sound else "[Certify] 🛑 FAILED")
        failures += not sound
    return failures


def replay_separation() -> int:
    failures = 0
    for claim in separation_suite():
        holds = check_separation(claim.problem, claim.premise, claim.clauses)
        clauses = " or ".join(",".join(c) for c in claim.clauses)
        print(f"[Certify] {claim.name}: {','.join(claim.premise)} forces => {clauses} forces "
              f"over {len(clone_closure(claim.problem))} upsets: {'✅' if holds else '🛑'}")
        failures += not holds
    return failures


def replay_fans(largest: int = 6) -> int:
    failures = 0
    for n in range(2, largest + 1):
        model, f = godel_fan(n)
        refuted = "k" not in truth_set(model, f)
        print(f"[Certify] fan {n}: root refutes {n}-pigeonhole formula: {'✅' if refuted else '🛑'}")
        failures += not refuted
    return failures


if __name__ == "__main__":
    configure_logging()

    print("\n\n--- PART 1: DEFINABILITY CERTIFICATES ---")
    failed = replay_definability()

    print("\n\n--- PART 2: SEPARATION PREDICATES ---")
    failed += replay_separation()

    print("\n\n--- PART 3: FAN MODELS AND THE CLASSICAL CONTRAST ---")
    failed += replay_fans()
    classical = check_validity(godel_fan(2)[1], LogicClass.CPL, 1)
    print(f"[Certify] 2-pigeonhole formula classically valid: {isinstance(classical, Valid)}")
    failed += not isinstance(classical, Valid)

    print(f"\n{'All certificates hold.' if not failed else f'{failed} certificate(s) FAILED.'}")
    sys.exit(1 if failed else 0)
