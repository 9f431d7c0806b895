"""
Building an index and retrieving documents
==========================================

Documents have a title and a body; title matches count double by default.
"""

from gesera import Document, DocumentCollection, IndexParams, Query, Strategy, build_index, retrieve
from gesera.text import default_tagger, reformulate_gesera, tokenize

docs = DocumentCollection([
    Document("d1", "the cat chased the dog around the garden", "Cats and dogs"),
    Document("d2", "a dog ran fast across the park and the dog barked"),
    Document("d3", "green plants grow in the garden near the house", "Garden plants"),
    Document("d4", "the market rose after the policy change"),
])
index = build_index(docs)
print(index.stats())

# a summary becomes a query after tagging and filtering
tagged = default_tagger().tag(tokenize("A black dog ran fast in the garden."))
query = reformulate_gesera(tagged)
print("query terms:", query.terms)

for doc_id, score in retrieve(index, query, k=3).entries:
    print(f"{doc_id}  {score:.4f}")

# turning off length normalization changes the ranking weights
flat = build_index(docs, IndexParams(b=0.0))
print(retrieve(flat, Query(("garden",), Strategy.RAW), k=3).ids)
