# An apple belongs in the kitchen. Tell the organizer to leave the kitchen out
# and it should fall back to the next-best room instead of giving up.
from csk_organizer.evalharness import CSKClassifier, NonAdaptiveClassifier, run_adaptability
from csk_organizer.fixtures import APPLE_BINS, apple_graph
from csk_organizer.reasoner import classify, classify_focused

g = apple_graph()
print("unfocused:", classify(g, "apple", APPLE_BINS).explanation)
print("no kitchen:", classify_focused(g, "apple", APPLE_BINS, ["living_room", "bedroom", "bathroom"]).explanation)

rep = run_adaptability("apple", APPLE_BINS, CSKClassifier(g), repetitions=5)
print(f"\npreferred: {rep.preferred}")
print("emphasized    answer    shifted  on-target")
for r in rep.shift_table:
    print(f"{r.emphasized:13s} {r.answer:9s} {r.shifted!s:8s} {r.matches_emphasized}")
print("verdict:", rep.verdict)

# a classifier that ignores the directive never moves
stub = run_adaptability("apple", APPLE_BINS, NonAdaptiveClassifier(CSKClassifier(g)), repetitions=5)
print("stub verdict:", stub.verdict)
