#pragma once

#define STRICH_VERSION_MAJOR 0
#define STRICH_VERSION_MINOR 1
#define STRICH_VERSION_PATCH 0
#define STRICH_VERSION "0.1.0"
