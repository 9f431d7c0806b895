"""
Part-of-speech make-up of a corpus
==================================

Nouns, verbs and adjectives are what the GeSERA query keeps, so it is
worth knowing how much of a corpus they cover.
"""

from gesera import Document, DocumentCollection
from gesera.text import PretaggedTagger, pos_distribution

news = DocumentCollection([
    Document("n1", "The central bank raised interest rates sharply in March."),
    Document("n2", "Officials expect slower growth across the region."),
])
print(pos_distribution(news).percentages)

# text already tagged by an external tagger can be used as is
tagged = DocumentCollection([Document("t1", "Officials/NNS expect/VBP slower/JJR growth/NN ./.")])
print(pos_distribution(tagged, PretaggedTagger()).percentages)
