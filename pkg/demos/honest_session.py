"""Walk one honest session of each protocol and print what crosses the air."""

from srta_sim.config import ScenarioConfig
from srta_sim.sim import World, run_session

for protocol in ("srta", "improved"):
    world = World(ScenarioConfig(protocol=protocol, seed=1))
    rep = run_session(world)
    print(f"== {protocol}: {rep.outcome}, data {rep.data[:16]}...")
    for entry in world.transcript:
        msg = entry.message()
        fields = ", ".join(f"{name}={v.hex()[:12]}.." if hasattr(v, "hex") else f"{name}={v}"
                           for name, v in msg.field_items())
        print(f"  {entry.step} {entry.direction:<14} {msg.LABEL:<4} {fields}")
    print("  tag ops:", rep.ops["tag"])
    print("  synchronized:", world.synchronized())
