#pragma once

#define FINGEO_VERSION "0.1.0"
