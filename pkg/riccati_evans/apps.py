from django.apps import AppConfig


class RiccatiEvansConfig(AppConfig):
    name = "riccati_evans"
    verbose_name = "Riccati-Evans"
