#ifndef LRA_LRA_HPP
#define LRA_LRA_HPP

#include "lra/artifacts.hpp"
#include "lra/config.hpp"
#include "lra/corpus_index.hpp"
#include "lra/evaluation.hpp"
#include "lra/factorization.hpp"
#include "lra/pattern.hpp"
#include "lra/pipeline.hpp"
#include "lra/relation_matrix.hpp"
#include "lra/similarity.hpp"
#include "lra/thesaurus.hpp"

#endif
