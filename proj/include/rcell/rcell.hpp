#ifndef RCELL_RCELL_HPP
#define RCELL_RCELL_HPP

#include "rcell/bench.hpp"
#include "rcell/cell.hpp"
#include "rcell/cycle_order.hpp"
#include "rcell/duration.hpp"
#include "rcell/exact_solver.hpp"
#include "rcell/instance_io.hpp"
#include "rcell/milp/branch_and_bound.hpp"
#include "rcell/milp/formulations.hpp"
#include "rcell/milp/lp_format.hpp"
#include "rcell/milp/model.hpp"
#include "rcell/milp/simplex.hpp"
#include "rcell/schedule.hpp"
#include "rcell/schedule_lp.hpp"

#endif // RCELL_RCELL_HPP
