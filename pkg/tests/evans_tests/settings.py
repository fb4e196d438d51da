"""
Django settings for testing
"""

SECRET_KEY = "django-riccati-evans-test-key"

DEBUG = True

INSTALLED_APPS = [
    "riccati_evans",
]

DATABASES = {
    "default": {
        "ENGINE": "django.db.backends.sqlite3",
        "NAME": ":memory:",
    }
}

RICCATI_EVANS = {
    "workers": 1,
}

USE_TZ = True
