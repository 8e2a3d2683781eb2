#pragma once

#include "qvl/annotations.hpp"
#include "qvl/assembly.hpp"
#include "qvl/errors.hpp"
#include "qvl/kb.hpp"
#include "qvl/kb_text.hpp"
#include "qvl/project.hpp"
#include "qvl/reasoner.hpp"
#include "qvl/verifier.hpp"
