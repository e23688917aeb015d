#pragma once

#include "corpus_forge/bench_templater.hpp"
#include "corpus_forge/chunker.hpp"
#include "corpus_forge/config.hpp"
#include "corpus_forge/config_file.hpp"
#include "corpus_forge/dedup.hpp"
#include "corpus_forge/document.hpp"
#include "corpus_forge/error.hpp"
#include "corpus_forge/jsonl.hpp"
#include "corpus_forge/langid.hpp"
#include "corpus_forge/pii.hpp"
#include "corpus_forge/pipeline.hpp"
#include "corpus_forge/quality.hpp"
#include "corpus_forge/sentences.hpp"
#include "corpus_forge/sft.hpp"
#include "corpus_forge/stats.hpp"
