"""Lexical diversity and frequency-bias analysis of machine-translated corpora."""

from .corpus import (Corpus, ParallelCorpus, SplitSpec, TokenizerConfig, VocabProfile,
                     build_vocab_profile, load_corpus, load_parallel, split_parallel, tokenize,
                     vocab_size, write_split)
from .diversity import (DiversityReport, FrequencySpectrum, diversity_report, frequency_spectrum,
                        mtld, ttr, yules_i, yules_k)
from .errors import (CorpusDecodeError, DegenerateBootstrapError, EmptyCorpusError, LexbiasError,
                     SplitSizeError, UndefinedMetricError, VariantFileError)
from .freqbias import (BiasClassConfig, BiasClassification, accumulated_differences,
                       classify_corpora, classify_word)
from .kernels import backend
from .significance import BootstrapConfig, BootstrapResult, bootstrap_compare
from .stream import analyze_file, profile_file
from .variants import VariantProfile, VariantSet, load_variant_sets, variant_profile

__version__ = "0.1.0"
