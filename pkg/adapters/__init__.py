# Package marker for adapters: triplet files, SeaNMF model directories, lexicon scoring
