#pragma once

#include "systolic/certify/certificate.hpp"
#include "systolic/diskmap/action.hpp"
#include "systolic/diskmap/disk_map.hpp"
#include "systolic/diskmap/one_form.hpp"
#include "systolic/diskmap/periodic_points.hpp"
#include "systolic/io/csv.hpp"
#include "systolic/io/files.hpp"
#include "systolic/io/json.hpp"
#include "systolic/io/svg.hpp"
#include "systolic/numerics/ode.hpp"
#include "systolic/numerics/quadrature.hpp"
#include "systolic/numerics/radial_function.hpp"
#include "systolic/numerics/roots.hpp"
#include "systolic/plug/plug.hpp"
#include "systolic/plug/realize.hpp"
#include "systolic/plug/verify.hpp"
#include "systolic/profile/profile.hpp"
#include "systolic/rotorus/orbits.hpp"
#include "systolic/rotorus/return_system.hpp"
#include "systolic/rotorus/rot_form.hpp"
#include "systolic/rotorus/volume.hpp"
