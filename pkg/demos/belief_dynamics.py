"""Expected benefit of the next step as the explainer keeps failing.

With a flat belief about the overlap size, every miss is bad news and the
expected benefit falls as 1/(t+1). A confident belief (small variance) can
instead make early misses encouraging: the pool shrinks faster than the
belief erodes. Writes ``belief_dynamics.svg`` to the working directory.
"""

from pathlib import Path

from explainsim import classify_trend, reproduce_figure1, reproduce_figure2
from explainsim.output import line_chart_svg

flat = reproduce_figure1([50, 100, 200, 300], benefit=1.0)
for c in flat.curves:
    eb = c.trajectory.expected_benefit
    print(f"{c.label:>10}: E(B_1) = {eb[0]:.3f}, E(B_10) = {eb[9]:.4f}")

varied = reproduce_figure2(n_r=300, mean=10.0, ratios=(0.5, 1, 2, 5))
for c in varied.curves:
    t, peak = c.trajectory.peak()
    print(f"{c.label:>10}: prior var/mean = {c.prior_variance / c.prior_mean:.2f},"
          f" {c.trend.value}, peak {peak:.4f} at t = {t}")

series = [(c.label, c.trajectory.t, c.trajectory.expected_benefit) for c in varied.curves]
Path("belief_dynamics.svg").write_text(
    line_chart_svg(series, title="Expected benefit by prior variance", ylabel="E(B_t)"))
