"""Run every scripted attack against both protocols and show why it lands or not."""

from srta_sim.adversary import attack_dos, attack_reader_impersonation, attack_tag_impersonation
from srta_sim.config import ScenarioConfig
from srta_sim.sim import World

for protocol in ("srta", "improved"):
    print(f"== {protocol}")
    for attack in (attack_tag_impersonation, attack_dos, attack_reader_impersonation):
        out = attack(World(ScenarioConfig(protocol=protocol, seed=2)))
        why = out.details.get("rejection") or out.details.get("honest_outcome") or "accepted"
        print(f"  {out.name:<22} success={out.success!s:<5} {why}")

world = World(ScenarioConfig(protocol="improved", seed=2))
out = attack_dos(world, mode="drops", repeats=10)
print("improved after 11 swallowed M4s:", out.details["honest_outcome"])
