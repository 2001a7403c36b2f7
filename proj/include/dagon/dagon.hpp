#pragma once

#include "dagon/context.hpp"
#include "dagon/corpus.hpp"
#include "dagon/ctx_model.hpp"
#include "dagon/error.hpp"
#include "dagon/eval.hpp"
#include "dagon/experiment.hpp"
#include "dagon/index.hpp"
#include "dagon/io.hpp"
#include "dagon/linker.hpp"
#include "dagon/pipeline.hpp"
#include "dagon/seeds.hpp"
#include "dagon/svm.hpp"
#include "dagon/synthetic.hpp"
#include "dagon/term_classifier.hpp"
#include "dagon/terminology.hpp"
#include "dagon/text.hpp"
