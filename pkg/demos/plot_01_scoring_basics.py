"""
Scoring retrieved lists
=======================

The score only ever looks at two ranked lists of document ids: the one
retrieved for the candidate summary and the one retrieved for a reference.
"""

from gesera import RankedList, sera, sera_dis

# three of the candidate's documents, two of them shared with the reference
cand = RankedList.from_ids(["d1", "d2", "d3"])
ref = RankedList.from_ids(["d2", "d3", "d4"])
print("overlap score:", sera(cand, [ref]))  # 2/3

# the discounted variant also cares where the shared documents sit
swapped = RankedList.from_ids(["b", "a"], cutoff=2)
same = RankedList.from_ids(["a", "b"], cutoff=2)
print("identical order:", sera_dis(same, [same]))
print("swapped order:  ", sera_dis(same, [swapped]))

# several references are simply averaged
refs = [ref, RankedList.from_ids(["d9"])]
print("two references:", sera(cand, refs))
