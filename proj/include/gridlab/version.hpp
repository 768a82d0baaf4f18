#pragma once

#define GRIDLAB_VERSION "0.1.0"
