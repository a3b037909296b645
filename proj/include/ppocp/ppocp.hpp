#pragma once

#include "ppocp/core.hpp"
#include "ppocp/simplex_qp.hpp"
#include "ppocp/support_qp.hpp"
#include "ppocp/maximin.hpp"
#include "ppocp/lcp.hpp"
#include "ppocp/nnls.hpp"
#include "ppocp/routes.hpp"
#include "ppocp/certify.hpp"
