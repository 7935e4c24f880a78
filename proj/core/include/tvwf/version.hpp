#pragma once

#define TVWF_VERSION "0.1.0"
#define TVWF_VERSION_MAJOR 0
#define TVWF_VERSION_MINOR 1
#define TVWF_VERSION_PATCH 0
