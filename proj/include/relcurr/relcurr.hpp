#pragma once

#include "relcurr/errors.hpp"
#include "relcurr/rng.hpp"
#include "relcurr/types.hpp"
#include "relcurr/parallel.hpp"
#include "relcurr/label_model.hpp"
#include "relcurr/losses.hpp"
#include "relcurr/augmentation.hpp"
#include "relcurr/questionnaire.hpp"
#include "relcurr/datasetgen.hpp"
#include "relcurr/annotator.hpp"
#include "relcurr/remote_annotator.hpp"
#include "relcurr/features.hpp"
#include "relcurr/model.hpp"
#include "relcurr/trainer.hpp"
#include "relcurr/evaluation.hpp"
#include "relcurr/io.hpp"
#include "relcurr/config.hpp"
#include "relcurr/experiment.hpp"
