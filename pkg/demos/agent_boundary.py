"""Moving measurement apparatus across the agent's boundary.

An agent is a target dimension, a set of measurements it can perform
directly, and a roster of external systems it could probe. Adopting an
external system's measurements as its own ("incorporating") is only
licensed by a tuning certificate showing each pointer measurement
realizes a definite target measurement; the reverse move
("deconstructing") re-explains a direct measurement as the pointer
reading of a postulated apparatus. The script runs one full round trip,
shows the refusal without a certificate, and prints the taxonomy of
how an extension can relate to what the agent already had.
"""

from mftk import (
    AgentState,
    StochasticMatrix,
    TuningRequiredError,
    classify_extension,
    computational_povm,
    deconstruct,
    final_label,
    final_measurements,
    incorporate,
    post_process,
    proxy_certificate,
    xbasis_povm,
)


def main():
    z = computational_povm(2)
    agent = AgentState(target_dim=2, direct={"z": z})
    print(f"agent: target dim {agent.target_dim}, direct measurements "
          f"{sorted(agent.direct)}\n")

    # Deconstruct: the direct measurement becomes the pointer reading of
    # a remembered apparatus on a new external system.
    outside = agent
    for name in list(agent.direct):
        outside = deconstruct(outside, name)
    print("after deconstructing 'z':")
    print(f"  direct   : {sorted(outside.direct)}")
    print(f"  external : {sorted(outside.external)}")
    print(f"  history  : {[e['event'] for e in outside.history]}\n")

    # Incorporation refuses to proceed on postulation alone.
    try:
        incorporate(outside, "proxy:z", None, "exclusive")
    except TuningRequiredError as err:
        print(f"without a certificate: {err}\n")

    # The stored apparatus specs let the proxy certify immediately, and
    # the round trip restores an equivalent direct measurement.
    cert = proxy_certificate(outside, "proxy:z")
    back, report = incorporate(outside, "proxy:z", cert, "exclusive")
    print("after certified re-incorporation:")
    print(f"  direct   : {sorted(back.direct)}")
    print(f"  case {report.case!r}, final class {report.final_label}, "
          f"comparison {report.comparison!r}\n")

    # Taxonomy: every way a certified extension can relate to the
    # current set, in both retention modes. Fixture sets: the standard
    # basis, its 20%-flipped coarsening, and the diagonal basis.
    flip = StochasticMatrix(2, 2, [[0.8, 0.2], [0.2, 0.8]])
    noisy = post_process(z, flip)
    x_basis = xbasis_povm()
    fixtures = {
        "upgrade": ([noisy], [z]),       # new set strictly dominates
        "downgrade": ([z], [noisy]),     # new set strictly dominated
        "duplicate": ([z], [z]),         # mutually simulable
        "innovation": ([z], [x_basis]),  # incomparable
    }
    print(f"{'case':<12} {'mode':<10} {'final class':<12} {'vs old set'}")
    for case, (old, new) in fixtures.items():
        assert classify_extension(old, new) == case
        for mode in ("inclusive", "exclusive"):
            _, symbol = final_measurements(case, mode, old, new)
            print(f"{case:<12} {mode:<10} {final_label(case, mode):<12} {symbol}")


if __name__ == "__main__":
    main()
