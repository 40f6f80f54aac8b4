#ifndef NAMESIFT_VERSION_HPP
#define NAMESIFT_VERSION_HPP

#define NAMESIFT_VERSION "0.1.0"

#endif
