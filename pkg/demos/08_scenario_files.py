"""
Scenario files and the command line
====================================

Whole setups live in JSON scenario files: dimension, time grid, dynamics,
state, per-slot resolutions, and named histories and queries.  The same
documents drive the ``decohist`` command-line tool.
"""

from pathlib import Path

from decohist import parse_scenario, run_query, serialize_scenario

scenarios = Path(__file__).resolve().parent.parent / "scenarios"

scenario = parse_scenario((scenarios / "z_then_x.json").read_text())
print("dimension:", scenario.family.dim)
print("named histories:", sorted(scenario.histories))
print("named queries:", sorted(scenario.queries))

# named queries run directly from the document
print("joint probability:", run_query(scenario, "p_joint")["probability"])
report = run_query(scenario, "weak")
print("weak check passed:", report["passed"], "violation:", report["worst_violation"])
print("normalized retrodiction:", run_query(scenario, "retro_z0_norm")["value"])

# documents round-trip exactly through the serializer
assert parse_scenario(serialize_scenario(scenario)).to_document() == scenario.to_document()
print("round-trip exact")

print()
print("the same from a shell:")
print("  decohist probs --scenario scenarios/z_then_x.json")
print("  decohist check --mode weak --scenario scenarios/z_then_x.json --output json")
print("  decohist oracle trace --history zpxp --scenario scenarios/z_then_x.json")
print("  decohist retrodict --past past_z0 --present x+ --normalized \\")
print("      --scenario scenarios/z_then_x.json")
