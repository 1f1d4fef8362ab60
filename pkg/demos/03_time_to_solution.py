"""
Time to solution on a small campaign
====================================

For each instance the annealer is restarted many times; theta is the fraction
of restarts that reach the exact ground energy and R99 the number of restarts
needed to see it with 99% probability.  When a graph has several
Hamiltonian paths, a valid assembly need not be the original sequence.
"""

from olcanneal import CampaignSpec, SimCimParams, r99, run_campaign, tts
from olcanneal.bench import campaign_summary

print("r99(0.5) =", r99(0.5), " tts(0.5, 20us) =", tts(0.5, 20.0))

spec = CampaignSpec(lengths=(5, 6, 7), instances_per_length=4,
                    solver=SimCimParams(attempts=300), master_seed=2)
reports = run_campaign(spec)

for r in reports:
    print(f"L={r.length} #{r.instance} vars={r.n_vars:3d} theta={r.report.theta:.3f} "
          f"R99={r.report.r99 if isinstance(r.report.r99, str) else round(r.report.r99, 2)} "
          f"valid={r.valid_assembly} unique={r.unique_path} "
          f"same_as_original={r.reconstructed == r.sequence}")

# mean / min / max / 90th percentile of TTS per sequence length
for length, row in campaign_summary(reports).items():
    s = row["tts_us"]
    print(f"length {length}: TTS mean {s['mean']:.0f} us, p90 {s['p90']:.0f} us")
