#ifndef SPARSEKIT_SPARSEKIT_HPP
#define SPARSEKIT_SPARSEKIT_HPP

#include "error.hpp"
#include "random.hpp"
#include "graph.hpp"
#include "io.hpp"
#include "oracle.hpp"
#include "shortest_paths.hpp"
#include "spanner.hpp"
#include "linear.hpp"
#include "dense.hpp"
#include "resistance.hpp"
#include "sparsify.hpp"
#include "solver.hpp"
#include "hardgen.hpp"
#include "generators.hpp"

#endif // SPARSEKIT_SPARSEKIT_HPP
